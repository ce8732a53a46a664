//! `basins`: classify a grid of initial conditions by the attractor their
//! forward orbit reaches.

use allee_core::dynamics::{basins, AttractorRef, BasinCell, BasinGrid, StateWindow};
use allee_core::equilibria::{boundary_equilibria, positive_equilibria, Equilibrium};

use crate::cli::{emit, emit_svg, resolve, BasinsArgs, Resolved};
use crate::error::{CliError, CliResult};
use crate::format::{fmt_f64, Document, Field};
use crate::svg::{palette, Plot};

const DEFAULT_RESOLUTION: usize = 100;

fn parse_window(values: &Option<Vec<f64>>) -> CliResult<StateWindow> {
    let w = match values {
        Some(v) => [v[0], v[1], v[2], v[3]],
        None => [0.0, 1.0, 0.0, 1.0],
    };
    Ok(StateWindow::new(w[0], w[1], w[2], w[3])?)
}

fn attractor_descriptor(att: &AttractorRef) -> Vec<Field> {
    match att {
        AttractorRef::Point(state) => vec![
            Field::text("point"),
            Field::num(state.u),
            Field::num(state.v),
        ],
        AttractorRef::Cycle {
            section_u,
            section_v,
            period,
        } => vec![
            Field::text("cycle"),
            Field::num(*section_u),
            Field::num(*section_v),
            Field::num(*period),
        ],
    }
}

fn document(rp: &Resolved, grid: &BasinGrid) -> Document {
    let mut doc = Document::new("basins");
    rp.push_header(&mut doc);
    doc.meta(
        "window",
        vec![
            Field::num(grid.window.u_min),
            Field::num(grid.window.u_max),
            Field::num(grid.window.v_min),
            Field::num(grid.window.v_max),
        ],
    );
    doc.meta("resolution", vec![Field::num(grid.resolution as f64)]);
    for (idx, att) in grid.attractors.iter().enumerate() {
        let mut fields = vec![Field::num(idx as f64)];
        fields.extend(attractor_descriptor(att));
        doc.meta("attractor", fields);
    }
    doc.meta(
        "undecided-fraction",
        vec![Field::num(grid.undecided_fraction())],
    );
    doc.columns(&["cell_u", "cell_v", "attractor_id"]);
    for j in 0..grid.resolution {
        for i in 0..grid.resolution {
            let center = grid.cell_center(i, j);
            let id = match grid.cell(i, j) {
                BasinCell::Attractor(k) => k as f64,
                BasinCell::Undecided => -1.0,
            };
            doc.row(vec![
                Field::num(center.u),
                Field::num(center.v),
                Field::num(id),
            ]);
        }
    }
    doc
}

fn render_svg(grid: &BasinGrid, eqs: &[Equilibrium]) -> String {
    let w = &grid.window;
    let mut plot = Plot::new(w.u_min, w.u_max, w.v_min, w.v_max);
    let n = grid.resolution;
    let du = (w.u_max - w.u_min) / n as f64;
    let dv = (w.v_max - w.v_min) / n as f64;
    for j in 0..n {
        for i in 0..n {
            let fill = match grid.cell(i, j) {
                // Stable color map: the palette entry is fixed by the
                // attractor's index in the grid's deterministic ordering.
                BasinCell::Attractor(k) => palette::BASINS[k % palette::BASINS.len()],
                BasinCell::Undecided => "#ffffff",
            };
            let u0 = w.u_min + i as f64 * du;
            let v0 = w.v_min + j as f64 * dv;
            plot.cell(u0, u0 + du, v0, v0 + dv, fill);
        }
    }
    for eq in eqs {
        super::portrait_glyph(&mut plot, eq);
    }
    plot.finish("u", "v")
}

pub fn run(args: &BasinsArgs) -> CliResult<()> {
    let rp = resolve(&args.params)?;
    let window = parse_window(&args.window)?;
    let resolution = args.resolution.unwrap_or(DEFAULT_RESOLUTION);
    if resolution == 0 {
        return Err(CliError::Validation(
            "--resolution must be at least 1".to_string(),
        ));
    }

    let grid = basins(&rp.params, window, resolution)?;

    println!(
        "basin grid {}x{} over u [{}, {}] x v [{}, {}]",
        resolution,
        resolution,
        fmt_f64(window.u_min),
        fmt_f64(window.u_max),
        fmt_f64(window.v_min),
        fmt_f64(window.v_max)
    );
    for (idx, att) in grid.attractors.iter().enumerate() {
        match att {
            AttractorRef::Point(state) => println!(
                "  attractor {idx}: point ({}, {})",
                fmt_f64(state.u),
                fmt_f64(state.v)
            ),
            AttractorRef::Cycle {
                section_u,
                section_v,
                period,
            } => println!(
                "  attractor {idx}: cycle through ({}, {}), period {}",
                fmt_f64(*section_u),
                fmt_f64(*section_v),
                fmt_f64(*period)
            ),
        }
    }
    println!(
        "  undecided cells: {:.3}%",
        100.0 * grid.undecided_fraction()
    );

    if rp.format.wants_csv() {
        emit(&document(&rp, &grid), &rp.path("basins", "csv"))?;
    }
    if rp.format.wants_svg() {
        let [origin, corner] = boundary_equilibria(&rp.params);
        let mut eqs = vec![origin, corner];
        eqs.extend(positive_equilibria(&rp.params));
        emit_svg(&render_svg(&grid, &eqs), &rp.path("basins", "svg"))?;
    }
    Ok(())
}
