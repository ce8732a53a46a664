//! `portrait`: phase portrait of the nondimensional system on the window
//! `[0, 1.1]^2` — nullclines, equilibrium glyphs, saddle manifolds, limit
//! cycles, and a deterministic fan of sample orbits.

use allee_core::dynamics::{
    find_limit_cycles, integrate, trace_manifolds, CycleStability, Direction, IntegratorOptions,
    LimitCycle, ManifoldKind,
};
use allee_core::equilibria::{
    boundary_equilibria, cubic_value, positive_equilibria, Equilibrium, EquilibriumKind,
};
use allee_core::{ModelParams, State};

use crate::cli::{emit, emit_svg, resolve, PortraitArgs, Resolved};
use crate::error::CliResult;
use crate::format::{Document, Field};
use crate::svg::{palette, Plot};

/// Portrait window, fixed by the output contract.
const WIN: f64 = 1.1;
/// Forward time horizon for sample orbits.
const FAN_TAU: f64 = 400.0;
/// Vertex budget per stored polyline.
const MAX_VERTICES: usize = 500;

pub struct PortraitObject {
    pub id: String,
    pub kind: String,
    pub points: Vec<(f64, f64)>,
}

fn thinned(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    if points.len() <= MAX_VERTICES {
        return points;
    }
    let stride = points.len().div_ceil(MAX_VERTICES);
    let last = *points.last().unwrap();
    let mut out: Vec<(f64, f64)> = points.into_iter().step_by(stride).collect();
    if out.last() != Some(&last) {
        out.push(last);
    }
    out
}

/// Prey nullcline `v = phi(u) / Q`, valid because `phi(u) = Q u - g(u)`.
fn prey_nullcline(params: &ModelParams) -> Vec<(f64, f64)> {
    let n = 400;
    (0..=n)
        .map(|i| {
            let u = WIN * i as f64 / n as f64;
            let v = u - cubic_value(u, params) / params.q;
            (u, v)
        })
        .collect()
}

/// Deterministic fan of starting points on a rectangle just inside the
/// window edge, walked by perimeter arc length.
fn fan_points(n: usize) -> Vec<State> {
    let (u0, u1, v0, v1) = (0.06, 1.08, 0.04, 1.05);
    let (w, h) = (u1 - u0, v1 - v0);
    let perimeter = 2.0 * (w + h);
    (0..n)
        .map(|k| {
            let mut t = perimeter * (k as f64 + 0.5) / n as f64;
            if t < w {
                return State::new(u0 + t, v1);
            }
            t -= w;
            if t < h {
                return State::new(u1, v1 - t);
            }
            t -= h;
            if t < w {
                return State::new(u1 - t, v0);
            }
            t -= w;
            State::new(u0, v1 - (h - t))
        })
        .collect()
}

/// Two cycles found from different foci are the same orbit when their
/// periods agree to half a percent.
fn dedup_cycles(mut cycles: Vec<LimitCycle>) -> Vec<LimitCycle> {
    cycles.sort_by(|a, b| a.period.total_cmp(&b.period));
    let mut out: Vec<LimitCycle> = Vec::new();
    for c in cycles {
        if out
            .last()
            .is_some_and(|p| (c.period - p.period).abs() < 5e-3 * p.period)
        {
            continue;
        }
        out.push(c);
    }
    out
}

/// Gathers every drawable object. Pure assembly; shared with the CSV and
/// SVG emitters so both describe the same geometry.
pub fn collect_objects(
    params: &ModelParams,
    trajectories: usize,
    tol_rel: f64,
    tol_abs: f64,
) -> CliResult<(Vec<PortraitObject>, Vec<Equilibrium>, Vec<LimitCycle>)> {
    let [origin, corner] = boundary_equilibria(params);
    let positive = positive_equilibria(params);
    let mut objects = Vec::new();

    objects.push(PortraitObject {
        id: "N1".into(),
        kind: "nullcline-prey".into(),
        points: prey_nullcline(params),
    });
    objects.push(PortraitObject {
        id: "N2".into(),
        kind: "nullcline-predator".into(),
        points: vec![(0.0, 0.0), (WIN, WIN)],
    });

    // Saddle manifolds: interior saddles plus the corner (1, 0).
    let mut saddles: Vec<(&str, &Equilibrium)> = Vec::new();
    if corner.kind == EquilibriumKind::Saddle {
        saddles.push(("C", &corner));
    }
    let labels: Vec<String> = (1..=positive.len()).map(|i| format!("P{i}")).collect();
    for (i, eq) in positive.iter().enumerate() {
        if eq.kind == EquilibriumKind::Saddle {
            saddles.push((&labels[i], eq));
        }
    }
    for (label, saddle) in &saddles {
        let branches = trace_manifolds(saddle, params)?;
        for branch in branches {
            let kind = match branch.kind {
                ManifoldKind::Stable => "manifold-stable",
                ManifoldKind::Unstable => "manifold-unstable",
            };
            objects.push(PortraitObject {
                id: format!("W-{label}-{}-{}", kind_tag(branch.kind), branch.direction),
                kind: kind.into(),
                points: thinned(branch.polyline.iter().map(|s| (s.u, s.v)).collect()),
            });
        }
    }

    // Limit cycles around the non-saddle simple interior equilibria.
    let mut found = Vec::new();
    for eq in &positive {
        if eq.multiplicity > 1
            || matches!(eq.kind, EquilibriumKind::Saddle | EquilibriumKind::Cusp)
        {
            continue;
        }
        found.extend(find_limit_cycles(params, eq.state)?);
    }
    let cycles = dedup_cycles(found);
    for (i, cycle) in cycles.iter().enumerate() {
        let kind = match cycle.stability {
            CycleStability::Stable => "cycle-stable",
            CycleStability::Unstable => "cycle-unstable",
        };
        objects.push(PortraitObject {
            id: format!("L{}", i + 1),
            kind: kind.into(),
            points: thinned(cycle.polyline.iter().map(|s| (s.u, s.v)).collect()),
        });
    }

    // Sample orbits from the deterministic edge fan.
    let attracting: Vec<State> = positive
        .iter()
        .filter(|eq| eq.kind == EquilibriumKind::Attractor)
        .map(|eq| eq.state)
        .collect();
    for (k, start) in fan_points(trajectories).into_iter().enumerate() {
        let opts = IntegratorOptions {
            rel_tol: tol_rel,
            abs_tol: tol_abs,
            record: true,
            known_equilibria: attracting.clone(),
            ..IntegratorOptions::default()
        };
        let traj = integrate(start, params, FAN_TAU, Direction::Forward, &opts)?;
        objects.push(PortraitObject {
            id: format!("T{}", k + 1),
            kind: "trajectory".into(),
            points: thinned(traj.samples.iter().map(|s| (s.state.u, s.state.v)).collect()),
        });
    }

    // Equilibria as single-vertex objects, boundary first.
    let mut eqs = vec![origin, corner];
    eqs.extend(positive);
    for (i, eq) in eqs.iter().enumerate() {
        let id = match i {
            0 => "E-O".to_string(),
            1 => "E-C".to_string(),
            _ => format!("E-P{}", i - 1),
        };
        objects.push(PortraitObject {
            id,
            kind: eq.kind.to_string(),
            points: vec![(eq.state.u, eq.state.v)],
        });
    }

    Ok((objects, eqs, cycles))
}

fn kind_tag(kind: ManifoldKind) -> &'static str {
    match kind {
        ManifoldKind::Stable => "s",
        ManifoldKind::Unstable => "u",
    }
}

fn render_svg(objects: &[PortraitObject], eqs: &[Equilibrium]) -> String {
    let mut plot = Plot::new(0.0, WIN, 0.0, WIN);
    for obj in objects {
        let (color, width, dashed) = match obj.kind.as_str() {
            "nullcline-prey" => (palette::PREY_NULLCLINE, 1.6, false),
            "nullcline-predator" => (palette::PREDATOR_NULLCLINE, 1.6, false),
            "manifold-stable" => (palette::STABLE_MANIFOLD, 1.8, false),
            "manifold-unstable" => (palette::UNSTABLE_MANIFOLD, 1.8, false),
            "cycle-stable" => (palette::CYCLE, 2.4, false),
            "cycle-unstable" => (palette::CYCLE, 2.4, true),
            "trajectory" => (palette::TRAJECTORY, 1.0, false),
            // Equilibrium rows are drawn as glyphs below.
            _ => continue,
        };
        plot.polyline(&obj.points, color, width, dashed);
    }
    for eq in eqs {
        super::portrait_glyph(&mut plot, eq);
    }
    plot.finish("u", "v")
}

pub fn run(args: &PortraitArgs) -> CliResult<()> {
    let rp = resolve(&args.params)?;
    let (objects, eqs, cycles) =
        collect_objects(&rp.params, args.trajectories, rp.tol.rel, rp.tol.abs)?;

    for cycle in &cycles {
        let stab = match cycle.stability {
            CycleStability::Stable => "stable",
            CycleStability::Unstable => "unstable",
        };
        println!(
            "cycle: {} period {:.6} through (u, v) = ({:.6}, {:.6}), residual {:.2e}, encloses {} equilibria",
            stab,
            cycle.period,
            cycle.section_u,
            cycle.section_v,
            cycle.residual,
            cycle.enclosed.len()
        );
    }

    if rp.format.wants_csv() {
        let doc = document(&rp, &objects, &cycles);
        emit(&doc, &rp.path("portrait", "csv"))?;
    }
    if rp.format.wants_svg() {
        emit_svg(&render_svg(&objects, &eqs), &rp.path("portrait", "svg"))?;
    }
    Ok(())
}

fn document(rp: &Resolved, objects: &[PortraitObject], cycles: &[LimitCycle]) -> Document {
    let mut doc = Document::new("portrait");
    rp.push_header(&mut doc);
    for (i, cycle) in cycles.iter().enumerate() {
        let stab = match cycle.stability {
            CycleStability::Stable => "stable",
            CycleStability::Unstable => "unstable",
        };
        doc.meta(
            "cycle",
            vec![
                Field::text(format!("L{}", i + 1)),
                Field::text(stab),
                Field::text("period"),
                Field::num(cycle.period),
                Field::text("residual"),
                Field::num(cycle.residual),
                Field::text("enclosed"),
                Field::num(cycle.enclosed.len() as f64),
            ],
        );
    }
    doc.note("one row per polyline vertex; equilibria are single-vertex objects");
    doc.columns(&["object_id", "object_kind", "u", "v"]);
    for obj in objects {
        for &(u, v) in &obj.points {
            doc.row(vec![
                Field::text(obj.id.clone()),
                Field::text(obj.kind.clone()),
                Field::num(u),
                Field::num(v),
            ]);
        }
    }
    doc
}
