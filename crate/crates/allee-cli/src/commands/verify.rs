//! `verify`: run every module-level invariant check at one parameter point
//! and report measured values against tolerances.
//!
//! Checks marked informational report a measured quantity without gating
//! the exit code (used where a degeneracy is the expected behaviour, e.g.
//! the fold transversality product at a Bogdanov-Takens point).

use allee_core::bifurcation::{bt_points, cusp_check, sotomayor_check};
use allee_core::equilibria::{
    boundary_equilibria, cubic_analysis, cubic_value, det_factor, positive_equilibria,
    EquilibriumKind,
};
use allee_core::model::{
    blowup_vector_field, jacobian, origin_character, vector_field, BlowupState,
};
use allee_core::{ModelParams, State};

use crate::cli::{emit, resolve, Resolved, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::format::{fmt_f64, Document, Field};

const FD_H: f64 = 1e-6;
/// Dead band for identities that hold exactly in floating point.
const EXACT: f64 = 0.0;
/// Scaled dead band for algebraic identities evaluated in f64.
const ALGEBRAIC: f64 = 1e-12;

struct Check {
    name: &'static str,
    measured: f64,
    tol: f64,
    pass: bool,
    info: bool,
    detail: String,
}

impl Check {
    fn bounded(name: &'static str, measured: f64, tol: f64, detail: impl Into<String>) -> Self {
        Check {
            name,
            measured,
            tol,
            pass: measured <= tol,
            info: false,
            detail: detail.into(),
        }
    }

    fn info(name: &'static str, measured: f64, detail: impl Into<String>) -> Self {
        Check {
            name,
            measured,
            tol: f64::NAN,
            pass: true,
            info: true,
            detail: detail.into(),
        }
    }
}

fn fd_jacobian(state: State, params: &ModelParams) -> CliResult<[[f64; 2]; 2]> {
    let f = |u: f64, v: f64| -> CliResult<(f64, f64)> {
        Ok(vector_field(State::new(u, v), params)?)
    };
    let (u, v) = (state.u, state.v);
    let (fu_p, gu_p) = f(u + FD_H, v)?;
    let (fu_m, gu_m) = f(u - FD_H, v)?;
    let (fv_p, gv_p) = f(u, v + FD_H)?;
    let (fv_m, gv_m) = f(u, v - FD_H)?;
    Ok([
        [(fu_p - fu_m) / (2.0 * FD_H), (fv_p - fv_m) / (2.0 * FD_H)],
        [(gu_p - gu_m) / (2.0 * FD_H), (gv_p - gv_m) / (2.0 * FD_H)],
    ])
}

/// Sign changes of the equilibrium cubic over a dense grid on (0, 1): an
/// independent count of the odd-multiplicity roots.
fn sign_scan_count(params: &ModelParams, n: usize) -> usize {
    let mut count = 0;
    let mut prev = cubic_value(1e-12, params);
    for i in 1..=n {
        let u = i as f64 / n as f64;
        let g = cubic_value(u, params);
        if g == 0.0 {
            continue;
        }
        if prev != 0.0 && (g > 0.0) != (prev > 0.0) {
            count += 1;
        }
        prev = g;
    }
    count
}

fn run_checks(rp: &Resolved) -> CliResult<Vec<Check>> {
    let params = rp.params;
    let ModelParams { a, m, q: _, s } = params;
    let mut checks = Vec::new();

    // 1. Analytic Jacobian against central finite differences.
    let probes = [
        State::new(0.2, 0.3),
        State::new(0.5, 0.5),
        State::new(0.8, 0.2),
        State::new(0.3, 0.9),
        State::new(0.7, 0.6),
    ];
    let mut worst = 0.0f64;
    for p in probes {
        let analytic = jacobian(p, &params)?;
        let fd = fd_jacobian(p, &params)?;
        let scale = 1.0
            + analytic
                .iter()
                .flatten()
                .fold(0.0f64, |acc, x| acc.max(x.abs()));
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((analytic[r][c] - fd[r][c]).abs() / scale);
            }
        }
    }
    checks.push(Check::bounded(
        "jacobian-fd",
        worst,
        rp.tol.verify,
        "max scaled |analytic - central FD| over 5 probe states",
    ));

    let analysis = cubic_analysis(&params);
    let positive = positive_equilibria(&params);
    let [origin, corner] = boundary_equilibria(&params);

    // 2. Equilibrium roots satisfy the cubic.
    let root_scale = 1.0 + (a * m).abs();
    let worst_root = positive
        .iter()
        .map(|eq| cubic_value(eq.state.u, &params).abs())
        .fold(0.0f64, f64::max);
    checks.push(Check::bounded(
        "root-residual",
        worst_root / root_scale,
        rp.tol.root,
        "max |g(u*)| over positive equilibria, scaled",
    ));

    // 3. Root count against an independent dense sign scan.
    let odd_roots = analysis
        .roots
        .iter()
        .filter(|r| r.multiplicity % 2 == 1)
        .count();
    let scanned = sign_scan_count(&params, 100_000);
    checks.push(Check::bounded(
        "root-count-scan",
        (scanned as f64 - odd_roots as f64).abs(),
        EXACT,
        format!("sign scan found {scanned}, cubic solver reports {odd_roots} odd-multiplicity roots"),
    ));

    // 4. Determinant identity det J = S u^2 (A + u) D(u) on the diagonal.
    let mut worst_det = 0.0f64;
    for eq in &positive {
        let u = eq.state.u;
        let predicted = s * u * u * (a + u) * det_factor(u, &params);
        let scale = eq.det.abs().max(1e-4);
        worst_det = worst_det.max((eq.det - predicted).abs() / scale);
    }
    checks.push(Check::bounded(
        "det-identity",
        worst_det,
        1e-10,
        "scaled |det J - S u^2 (A+u) D(u)| at positive equilibria",
    ));

    // 5. Reported kinds agree with eigenvalue sign structure.
    let mut margin = f64::INFINITY;
    let mut consistent = true;
    for eq in &positive {
        let [l1, l2] = eq.eigenvalues;
        let max_re = l1.re.max(l2.re);
        let min_re = l1.re.min(l2.re);
        let this = match eq.kind {
            EquilibriumKind::Saddle => -eq.det,
            EquilibriumKind::Attractor => -max_re,
            EquilibriumKind::Repeller => min_re,
            EquilibriumKind::StableSaddleNode => -eq.trace,
            EquilibriumKind::UnstableSaddleNode => eq.trace,
            // Dead-band kinds assert closeness, not a sign.
            EquilibriumKind::Marginal
            | EquilibriumKind::Cusp
            | EquilibriumKind::NonHyperbolicSaddle => continue,
        };
        if this <= 0.0 {
            consistent = false;
        }
        margin = margin.min(this);
    }
    if margin.is_infinite() {
        margin = 0.0;
    }
    checks.push(Check {
        name: "classification-eigen",
        measured: margin,
        tol: 0.0,
        pass: consistent,
        info: false,
        detail: "smallest eigenvalue-sign margin backing a reported kind".into(),
    });

    // 6. Corner (1, 0) linearisation matches its closed form.
    let corner_det = -s * (1.0 - m) * (1.0 + a) * (1.0 + a);
    let corner_trace = (1.0 + a) * (s - (1.0 - m));
    let corner_err = ((corner.det - corner_det).abs())
        .max((corner.trace - corner_trace).abs())
        / (1.0 + corner_det.abs().max(corner_trace.abs()));
    checks.push(Check::bounded(
        "boundary-corner",
        corner_err,
        ALGEBRAIC,
        "corner (1,0) det/trace against -S(1-M)(1+A)^2 and (1+A)(S-(1-M))",
    ));

    // 7. Origin: vanishing linearisation, saddle sectors in the blow-up
    //    chart.
    let report = origin_character(&params);
    let origin_lin = origin.det.abs().max(origin.trace.abs());
    let chart = {
        let f = |x: f64, y: f64| -> CliResult<(f64, f64)> {
            Ok(blowup_vector_field(BlowupState { x, y }, &params)?)
        };
        let (fx_p, gx_p) = f(FD_H, 0.0)?;
        let (fx_m, gx_m) = f(-FD_H, 0.0)?;
        let (fy_p, gy_p) = f(0.0, FD_H)?;
        let (fy_m, gy_m) = f(0.0, -FD_H)?;
        [
            [(fx_p - fx_m) / (2.0 * FD_H), (fy_p - fy_m) / (2.0 * FD_H)],
            [(gx_p - gx_m) / (2.0 * FD_H), (gy_p - gy_m) / (2.0 * FD_H)],
        ]
    };
    let (lam1, lam2) = report.chart_origin_eigenvalues;
    let chart_err = (chart[0][0] - lam1)
        .abs()
        .max((chart[1][1] - lam2).abs())
        .max(chart[1][0].abs())
        / (1.0 + lam1.abs());
    checks.push(Check::bounded(
        "origin-blowup",
        origin_lin.max(chart_err),
        rp.tol.verify,
        "origin linearisation is zero; chart eigenvalues are (AS, -AS)",
    ));

    // 8. Coordinate axes are invariant to the last bit.
    let mut worst_axis = 0.0f64;
    for k in 1..=9 {
        let t = k as f64 / 10.0;
        worst_axis = worst_axis.max(vector_field(State::new(t, 0.0), &params)?.1.abs());
        worst_axis = worst_axis.max(vector_field(State::new(0.0, t), &params)?.0.abs());
    }
    checks.push(Check::bounded(
        "axis-invariance",
        worst_axis,
        EXACT,
        "field components along u = 0 and v = 0 vanish exactly",
    ));

    // 9. Fold transversality and nondegeneracy, when the point sits on a
    //    saddle-node line.
    if analysis.roots.iter().any(|r| r.multiplicity == 2) {
        let report = sotomayor_check(&params)?;
        let smallest = report
            .transversality
            .abs()
            .min(report.measured_second_directional.abs());
        checks.push(Check {
            name: "fold-sotomayor",
            measured: smallest,
            tol: 1e-12,
            pass: report.genuine && smallest > 1e-12,
            info: false,
            detail: format!(
                "transversality {} and curvature probe {} both bounded away from zero",
                fmt_f64(report.transversality),
                fmt_f64(report.measured_second_directional)
            ),
        });
    }

    // 10. Bogdanov-Takens cusp structure for this (A, M).
    let cusps = cusp_check(a, m)?;
    if !cusps.is_empty() {
        let mut worst_bt = 0.0f64;
        let mut entry_ok = true;
        for c in &cusps {
            worst_bt = worst_bt.max(c.det.abs()).max(c.trace.abs());
            worst_bt = worst_bt
                .max(c.nilpotent[0][0].abs())
                .max(c.nilpotent[1][0].abs())
                .max(c.nilpotent[1][1].abs());
            if c.nilpotent_entry.abs() <= 1e-6 * (1.0 + c.scale) {
                entry_ok = false;
            }
        }
        checks.push(Check {
            name: "bt-cusp",
            measured: worst_bt,
            tol: 1e-9,
            pass: worst_bt <= 1e-9 && entry_ok,
            info: false,
            detail: format!(
                "{} BT point(s): det, trace, and transformed block are nilpotent with a nonzero entry",
                cusps.len()
            ),
        });

        // 11. The fold transversality product degenerates at the BT S; this
        //     is the expected codimension-two behaviour, so it is reported
        //     without gating the exit code.
        for bt in bt_points(a, m) {
            let at_bt = ModelParams::new(a, m, bt.q, bt.s)
                .map_err(CliError::from)
                .and_then(|p| sotomayor_check(&p).map_err(CliError::from))?;
            checks.push(Check::info(
                "bt-degeneracy",
                at_bt.uv_product.abs(),
                format!(
                    "fold eigenvector product U.V at the {} BT point; expected to vanish",
                    crate::commands::equilibria::fold_side_label(bt.side)
                ),
            ));
        }
    }

    Ok(checks)
}

pub fn run(args: &VerifyArgs) -> CliResult<()> {
    let rp = resolve(&args.params)?;
    let checks = run_checks(&rp)?;

    let mut doc = Document::new("verify");
    rp.push_header(&mut doc);
    doc.columns(&["check", "measured", "tolerance", "status"]);

    println!(
        "verification at A = {}, M = {}, Q = {}, S = {}",
        fmt_f64(rp.params.a),
        fmt_f64(rp.params.m),
        fmt_f64(rp.params.q),
        fmt_f64(rp.params.s)
    );
    let mut failed: Option<&'static str> = None;
    for check in &checks {
        let status = if check.info {
            "info"
        } else if check.pass {
            "pass"
        } else {
            "FAIL"
        };
        if !check.pass && failed.is_none() {
            failed = Some(check.name);
        }
        let tol_text = if check.info {
            "-".to_string()
        } else {
            fmt_f64(check.tol)
        };
        println!(
            "  {:<22} measured {:<24} tol {:<14} {}",
            check.name,
            fmt_f64(check.measured),
            tol_text,
            status
        );
        println!("      {}", check.detail);
        doc.row(vec![
            Field::text(check.name),
            Field::num(check.measured),
            if check.info {
                Field::text("-")
            } else {
                Field::num(check.tol)
            },
            Field::text(status),
        ]);
    }

    emit(&doc, &rp.path("verify", "txt"))?;

    match failed {
        Some(name) => Err(CliError::Verification(format!("check `{name}` failed"))),
        None => {
            println!("all checks passed");
            Ok(())
        }
    }
}
