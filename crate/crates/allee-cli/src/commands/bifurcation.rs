//! `bifurcation`: two-parameter `(Q, S)` diagram — fold lines, Hopf curve,
//! Bogdanov-Takens points, and a region grid of equilibrium configurations.

use allee_core::bifurcation::{diagram, BifurcationDiagram, Window};
use allee_core::equilibria::saddle_node_thresholds;

use crate::cli::{emit, emit_svg, resolve_plane, BifurcationArgs, Resolved};
use crate::commands::equilibria::fold_side_label;
use crate::error::{CliError, CliResult};
use crate::format::{fmt_f64, Document, Field};
use crate::svg::{palette, Plot};

/// Default window: brackets both folds and the Hopf hump for moderate
/// refuge/threshold values.
const DEFAULT_WINDOW: [f64; 4] = [0.30, 0.42, 0.0, 0.45];
const DEFAULT_RESOLUTION: usize = 60;

fn parse_window(values: &Option<Vec<f64>>) -> CliResult<Window> {
    let w = match values {
        Some(v) => [v[0], v[1], v[2], v[3]],
        None => DEFAULT_WINDOW,
    };
    Ok(Window::new(w[0], w[1], w[2], w[3])?)
}

/// Splits the Q-sorted Hopf samples into the two u-branches separated by
/// the saddle band between the fold abscissas, each re-sorted along `u` so
/// the drawn polyline follows the curve's own parametrisation.
fn hopf_branches(diag: &BifurcationDiagram) -> Vec<(&'static str, Vec<(f64, f64)>)> {
    let thresholds = saddle_node_thresholds(diag.a, diag.m);
    let split_u = if thresholds.len() == 2 {
        Some(0.5 * (thresholds[0].u_double + thresholds[1].u_double))
    } else {
        None
    };
    let mut low: Vec<_> = diag
        .hopf_curve
        .iter()
        .filter(|p| split_u.map_or(true, |s| p.u < s))
        .map(|p| (p.u, p.q, p.s))
        .collect();
    let mut high: Vec<_> = diag
        .hopf_curve
        .iter()
        .filter(|p| split_u.is_some_and(|s| p.u >= s))
        .map(|p| (p.u, p.q, p.s))
        .collect();
    low.sort_by(|a, b| a.0.total_cmp(&b.0));
    high.sort_by(|a, b| a.0.total_cmp(&b.0));
    let strip = |pts: Vec<(f64, f64, f64)>| pts.into_iter().map(|(_, q, s)| (q, s)).collect();
    let mut out = Vec::new();
    if !low.is_empty() {
        out.push(("low-u", strip(low)));
    }
    if !high.is_empty() {
        out.push(("high-u", strip(high)));
    }
    out
}

fn render_svg(diag: &BifurcationDiagram) -> String {
    let w = &diag.window;
    let mut plot = Plot::new(w.q_min, w.q_max, w.s_min, w.s_max);
    let n = diag.resolution;
    let dq = (w.q_max - w.q_min) / n as f64;
    let ds = (w.s_max - w.s_min) / n as f64;
    for (idx, label) in diag.regions.iter().enumerate() {
        let i = idx % n;
        let j = idx / n;
        let fill = match label.count {
            3 => palette::REGION_THREE,
            0 => "#ffffff",
            _ => palette::REGION_ONE,
        };
        let q0 = w.q_min + i as f64 * dq;
        let s0 = w.s_min + j as f64 * ds;
        plot.cell(q0, q0 + dq, s0, s0 + ds, fill);
    }
    for th in &diag.fold_lines {
        plot.polyline(
            &[(th.q, w.s_min), (th.q, w.s_max)],
            palette::FOLD,
            2.0,
            false,
        );
    }
    for (_, branch) in hopf_branches(diag) {
        plot.polyline(&branch, palette::HOPF, 2.2, false);
    }
    for bt in &diag.bt_points {
        if bt.q >= w.q_min && bt.q <= w.q_max && bt.s >= w.s_min && bt.s <= w.s_max {
            plot.diamond(bt.q, bt.s, 6.0);
            plot.label(bt.q, bt.s, 10.0, -8.0, "BT");
        }
    }
    for (k, th) in diag.fold_lines.iter().enumerate() {
        plot.label(th.q, w.s_max, 4.0, 16.0, &format!("SN{}", k + 1));
    }
    if let Some((_, branch)) = hopf_branches(diag).first() {
        if let Some(&(q, s)) = branch.last() {
            plot.label(q, s, -22.0, -10.0, "H");
        }
    }
    plot.finish("Q", "S")
}

fn document(rp: &Resolved, diag: &BifurcationDiagram) -> Document {
    let mut doc = Document::new("bifurcation");
    rp.push_header(&mut doc);
    doc.meta(
        "window",
        vec![
            Field::num(diag.window.q_min),
            Field::num(diag.window.q_max),
            Field::num(diag.window.s_min),
            Field::num(diag.window.s_max),
        ],
    );
    doc.meta("resolution", vec![Field::num(diag.resolution as f64)]);
    doc.columns(&["object", "q", "s", "u", "count", "kinds"]);
    for th in &diag.fold_lines {
        doc.row(vec![
            Field::text("sn-line"),
            Field::num(th.q),
            Field::empty(),
            Field::num(th.u_double),
            Field::empty(),
            Field::text(fold_side_label(th.side)),
        ]);
    }
    for pt in &diag.hopf_curve {
        doc.row(vec![
            Field::text("hopf"),
            Field::num(pt.q),
            Field::num(pt.s),
            Field::num(pt.u),
            Field::empty(),
            Field::empty(),
        ]);
    }
    for bt in &diag.bt_points {
        doc.row(vec![
            Field::text("bt"),
            Field::num(bt.q),
            Field::num(bt.s),
            Field::num(bt.u_double),
            Field::empty(),
            Field::text(fold_side_label(bt.side)),
        ]);
    }
    let n = diag.resolution;
    let dq = (diag.window.q_max - diag.window.q_min) / n as f64;
    let ds = (diag.window.s_max - diag.window.s_min) / n as f64;
    for (idx, label) in diag.regions.iter().enumerate() {
        let i = idx % n;
        let j = idx / n;
        let q = diag.window.q_min + (i as f64 + 0.5) * dq;
        let s = diag.window.s_min + (j as f64 + 0.5) * ds;
        let kinds = label
            .kinds
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join("+");
        doc.row(vec![
            Field::text("region"),
            Field::num(q),
            Field::num(s),
            Field::empty(),
            Field::num(label.count as f64),
            Field::text(kinds),
        ]);
    }
    doc
}

pub fn run(args: &BifurcationArgs) -> CliResult<()> {
    let rp = resolve_plane(&args.params)?;
    let window = match (&args.window, rp.preset) {
        (Some(v), _) => parse_window(&Some(v.clone()))?,
        (None, Some(p)) if p.window.is_some() => {
            let w = p.window.unwrap();
            Window::new(w[0], w[1], w[2], w[3])?
        }
        _ => parse_window(&None)?,
    };
    let resolution = args
        .resolution
        .or_else(|| rp.preset.and_then(|p| p.resolution))
        .unwrap_or(DEFAULT_RESOLUTION);
    if resolution == 0 {
        return Err(CliError::Validation(
            "--resolution must be at least 1".to_string(),
        ));
    }

    let diag = diagram(rp.params.a, rp.params.m, window, resolution)?;

    println!(
        "bifurcation diagram for (A, M) = ({}, {}) over Q [{}, {}] x S [{}, {}]",
        fmt_f64(diag.a),
        fmt_f64(diag.m),
        fmt_f64(window.q_min),
        fmt_f64(window.q_max),
        fmt_f64(window.s_min),
        fmt_f64(window.s_max)
    );
    for th in &diag.fold_lines {
        println!(
            "  sn-line ({}): Q = {} (double root u = {})",
            fold_side_label(th.side),
            fmt_f64(th.q),
            fmt_f64(th.u_double)
        );
    }
    println!("  hopf curve: {} sampled points in window", diag.hopf_curve.len());
    for bt in &diag.bt_points {
        println!(
            "  bt ({}): (Q, S) = ({}, {}) at u = {}",
            fold_side_label(bt.side),
            fmt_f64(bt.q),
            fmt_f64(bt.s),
            fmt_f64(bt.u_double)
        );
    }

    if rp.format.wants_csv() {
        emit(&document(&rp, &diag), &rp.path("bifurcation", "csv"))?;
    }
    if rp.format.wants_svg() {
        emit_svg(&render_svg(&diag), &rp.path("bifurcation", "svg"))?;
    }
    Ok(())
}
