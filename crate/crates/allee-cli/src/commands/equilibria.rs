//! `equilibria`: classify boundary and positive equilibria at one
//! parameter point, reporting the cubic's case tag and fold thresholds.

use allee_core::equilibria::{
    boundary_equilibria, cubic_analysis, positive_equilibria, saddle_node_thresholds, Equilibrium,
    FoldSide, DELTA_TOL, FOLD_TOL, TRACE_TOL,
};

use crate::cli::{emit, resolve, EquilibriaArgs};
use crate::error::CliResult;
use crate::format::{fmt_f64, Document, Field};

pub fn fold_side_label(side: FoldSide) -> &'static str {
    match side {
        FoldSide::Lower => "lower",
        FoldSide::Upper => "upper",
        FoldSide::Triple => "triple",
    }
}

fn eig_text(eq: &Equilibrium) -> String {
    let [l1, l2] = eq.eigenvalues;
    if l1.im != 0.0 {
        format!("{} +/- {}i", fmt_f64(l1.re), fmt_f64(l1.im.abs()))
    } else {
        format!("{}, {}", fmt_f64(l1.re), fmt_f64(l2.re))
    }
}

fn push_equilibrium_row(doc: &mut Document, id: &str, eq: &Equilibrium) {
    doc.row(vec![
        Field::text(id),
        Field::text(eq.kind.to_string()),
        Field::num(eq.state.u),
        Field::num(eq.state.v),
        Field::num(eq.multiplicity as f64),
        Field::num(if eq.near_fold { 1.0 } else { 0.0 }),
        Field::num(eq.det),
        Field::num(eq.trace),
        Field::num(eq.eigenvalues[0].re),
        Field::num(eq.eigenvalues[0].im),
        Field::num(eq.eigenvalues[1].re),
        Field::num(eq.eigenvalues[1].im),
    ]);
}

pub fn run(args: &EquilibriaArgs) -> CliResult<()> {
    let rp = resolve(&args.params)?;
    let params = rp.params;

    let analysis = cubic_analysis(&params);
    let thresholds = saddle_node_thresholds(params.a, params.m);
    let [origin, corner] = boundary_equilibria(&params);
    let positive = positive_equilibria(&params);

    let mut doc = Document::new("equilibria");
    rp.push_header(&mut doc);
    doc.tol("trace-deadband", TRACE_TOL);
    doc.tol("fold-deadband", FOLD_TOL);
    doc.tol("delta-deadband", DELTA_TOL);
    doc.meta("case", vec![Field::text(analysis.case.to_string())]);
    doc.meta(
        "cubic",
        vec![
            Field::text("T"),
            Field::num(analysis.t),
            Field::text("L"),
            Field::num(analysis.l),
            Field::text("delta"),
            Field::num(analysis.delta),
        ],
    );
    for th in &thresholds {
        doc.meta(
            "fold",
            vec![
                Field::text(fold_side_label(th.side)),
                Field::num(th.q),
                Field::num(th.u_double),
            ],
        );
    }
    doc.columns(&[
        "id",
        "kind",
        "u",
        "v",
        "multiplicity",
        "near_fold",
        "det",
        "trace",
        "eig1_re",
        "eig1_im",
        "eig2_re",
        "eig2_im",
    ]);
    push_equilibrium_row(&mut doc, "O", &origin);
    push_equilibrium_row(&mut doc, "C", &corner);
    for (i, eq) in positive.iter().enumerate() {
        let id = format!("P{}", i + 1);
        push_equilibrium_row(&mut doc, &id, eq);
    }

    // Human-readable summary.
    println!(
        "parameters: A = {}, M = {}, Q = {}, S = {}",
        fmt_f64(params.a),
        fmt_f64(params.m),
        fmt_f64(params.q),
        fmt_f64(params.s)
    );
    println!(
        "cubic: case {}, T = {}, L = {}, delta = {}",
        analysis.case,
        fmt_f64(analysis.t),
        fmt_f64(analysis.l),
        fmt_f64(analysis.delta)
    );
    if thresholds.is_empty() {
        println!("fold thresholds: none for this (A, M)");
    } else {
        for th in &thresholds {
            println!(
                "fold threshold ({}): Q = {} at u = {}",
                fold_side_label(th.side),
                fmt_f64(th.q),
                fmt_f64(th.u_double)
            );
        }
    }
    println!("equilibria:");
    let print_eq = |id: &str, eq: &Equilibrium| {
        let mut tags = String::new();
        if eq.multiplicity > 1 {
            tags.push_str(&format!(" [multiplicity {}]", eq.multiplicity));
        }
        if eq.near_fold {
            tags.push_str(" [near fold]");
        }
        println!(
            "  {:<3} ({}, {})  {}  eig: {}{}",
            id,
            fmt_f64(eq.state.u),
            fmt_f64(eq.state.v),
            eq.kind,
            eig_text(eq),
            tags
        );
    };
    print_eq("O", &origin);
    print_eq("C", &corner);
    for (i, eq) in positive.iter().enumerate() {
        print_eq(&format!("P{}", i + 1), eq);
    }

    emit(&doc, &rp.path("equilibria", "txt"))
}
