//! Bifurcation structure in the `(Q, S)` parameter plane at fixed `(A, M)`.
//!
//! Three organising objects live in that plane: two vertical fold lines at
//! the critical predation strengths `Q-` and `Q+` (where equilibria collapse
//! pairwise), the Hopf curve `{(Q(u), S(u)) : u in (0,1)}` parametrised by
//! the equilibrium abscissa (retaining only antisaddles, `det > 0`), and the
//! Bogdanov-Takens points where the Hopf curve meets the fold lines with
//! both eigenvalues at zero.

use rayon::prelude::*;

use crate::equilibria::{
    self, CubicAnalysis, Equilibrium, EquilibriumKind, FoldSide, SaddleNodeThreshold,
};
use crate::error::{Error, Result};
use crate::model::{self, ModelParams, State};

/// One point of the Hopf curve: the simple equilibrium at abscissa `u` has a
/// purely imaginary eigenvalue pair at `(q, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint {
    pub q: f64,
    pub s: f64,
    pub u: f64,
}

/// A Bogdanov-Takens point: fold and Hopf conditions hold simultaneously,
/// so the Jacobian at the collapsed equilibrium is nilpotent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BtPoint {
    pub q: f64,
    pub s: f64,
    /// Abscissa of the doubly degenerate equilibrium.
    pub u_double: f64,
    pub side: FoldSide,
}

/// Transversality diagnostics for a fold, following the standard
/// saddle-node genuineness test with left/right null vectors `U`, `V` of the
/// Jacobian at the collapsed equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SotomayorReport {
    pub q: f64,
    pub s: f64,
    pub u_double: f64,
    /// `U . dF/dQ = S (1 + A + M - u*)/(2Q)` with `u*` the simple root.
    pub transversality: f64,
    /// Closed-form nondegeneracy scalar
    /// `-2 S (2 + A - M)(1 + A + M - u*) / (Q (u* - T))`.
    pub nondegeneracy: f64,
    /// Directly measured `U . D2F(V, V)` by central finite differences along
    /// the null direction; reported alongside the closed form so the two can
    /// be compared.
    pub measured_second_directional: f64,
    /// `U . V`; this degenerates to zero exactly at the Bogdanov-Takens
    /// point, where the fold test loses meaning.
    pub uv_product: f64,
    /// Both scalars bounded away from zero: the fold is a genuine
    /// saddle-node for this parameter slice.
    pub genuine: bool,
}

/// Nilpotency diagnostics at a Bogdanov-Takens point.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspReport {
    pub bt: BtPoint,
    /// Jacobian at the collapsed equilibrium; equals `c [[1,-1],[1,-1]]`
    /// with `c = Q u^2 > 0`.
    pub jacobian: [[f64; 2]; 2],
    pub det: f64,
    pub trace: f64,
    /// Similarity transform of the Jacobian into its nilpotent normal form.
    pub nilpotent: [[f64; 2]; 2],
    /// The single nonzero entry of the transformed matrix (row 0, col 1).
    pub nilpotent_entry: f64,
    /// Reference scale `c = Q u^2` the entry is compared against.
    pub scale: f64,
}

/// Label of one parameter-plane region: how many positive equilibria and of
/// which kinds (ascending in `u`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionLabel {
    pub count: usize,
    pub kinds: Vec<EquilibriumKind>,
}

/// Rectangular window in the `(Q, S)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub q_min: f64,
    pub q_max: f64,
    pub s_min: f64,
    pub s_max: f64,
}

impl Window {
    pub fn new(q_min: f64, q_max: f64, s_min: f64, s_max: f64) -> Result<Self> {
        for (name, value) in [
            ("q_min", q_min),
            ("q_max", q_max),
            ("s_min", s_min),
            ("s_max", s_max),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("window bound {name} = {value}")));
            }
        }
        if !(q_min > 0.0 && q_max > q_min) {
            return Err(Error::InvalidParameter(format!(
                "window requires 0 < q_min < q_max, got [{q_min}, {q_max}]"
            )));
        }
        if !(s_min >= 0.0 && s_max > s_min) {
            return Err(Error::InvalidParameter(format!(
                "window requires 0 <= s_min < s_max, got [{s_min}, {s_max}]"
            )));
        }
        Ok(Self { q_min, q_max, s_min, s_max })
    }
}

/// A sampled bifurcation diagram over a `(Q, S)` window.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationDiagram {
    pub a: f64,
    pub m: f64,
    pub window: Window,
    /// Fold lines whose critical `Q` lies inside the window.
    pub fold_lines: Vec<SaddleNodeThreshold>,
    /// Hopf curve restricted to the window, sorted by `Q`.
    pub hopf_curve: Vec<HopfPoint>,
    /// All Bogdanov-Takens points at this `(A, M)` (inside the window or
    /// not; renderers clip).
    pub bt_points: Vec<BtPoint>,
    /// Region labels at the cell centres of a `resolution x resolution`
    /// grid, row-major with `Q` varying fastest.
    pub resolution: usize,
    pub regions: Vec<RegionLabel>,
}

/// Samples the Hopf curve `Q(u) = phi(u)/u`, `S(u) = f(u)` over `u` in
/// `(0, 1)`, keeping points with `S > 0` and `det > 0` (antisaddles only),
/// sorted by `Q` ascending.
pub fn hopf_curve(a: f64, m: f64, n_points: usize) -> Result<Vec<HopfPoint>> {
    let probe = ModelParams::new(a, m, 1.0, 1.0)?;
    let n = n_points.max(8);
    let mut pts: Vec<HopfPoint> = (1..n)
        .filter_map(|i| {
            let u = i as f64 / n as f64;
            let s = equilibria::hopf_function(u, &probe);
            if s <= 0.0 {
                return None;
            }
            if equilibria::det_factor(u, &probe) <= 0.0 {
                return None;
            }
            let q = model::phi(u, a, m) / u;
            if q <= 0.0 {
                return None;
            }
            Some(HopfPoint { q, s, u })
        })
        .collect();
    pts.sort_by(|x, y| x.q.partial_cmp(&y.q).unwrap());
    Ok(pts)
}

/// Bogdanov-Takens points at fixed `(A, M)`: on each fold line, the `S`
/// value where the collapsed equilibrium also has zero trace,
/// `S = Q u_d / (A + u_d)` (equivalently `f(u_d)`).
pub fn bt_points(a: f64, m: f64) -> Vec<BtPoint> {
    equilibria::saddle_node_thresholds(a, m)
        .into_iter()
        .filter_map(|th| {
            let s = th.q * th.u_double / (a + th.u_double);
            (s > 0.0).then_some(BtPoint { q: th.q, s, u_double: th.u_double, side: th.side })
        })
        .collect()
}

fn fold_data(params: &ModelParams) -> Result<(CubicAnalysis, f64, f64)> {
    let analysis = equilibria::cubic_analysis(params);
    let double = analysis.roots.iter().find(|r| r.multiplicity >= 2);
    let Some(double) = double else {
        return Err(Error::Precondition(format!(
            "no fold at (A, M, Q) = ({}, {}, {}): the cubic has only simple roots",
            params.a, params.m, params.q
        )));
    };
    let u_double = double.u;
    let u_simple = analysis
        .roots
        .iter()
        .find(|r| r.multiplicity == 1)
        .map(|r| r.u)
        .unwrap_or(analysis.t - 2.0 * u_double);
    Ok((analysis, u_double, u_simple))
}

/// Saddle-node genuineness diagnostics at a fold.
///
/// Precondition: `(A, M, Q)` sits on a fold line (the cubic has a double
/// root). The closed-form scalars use the simple root `u*`; the measured
/// second directional derivative is an independent finite-difference probe
/// of the same quantity.
pub fn sotomayor_check(params: &ModelParams) -> Result<SotomayorReport> {
    let (analysis, u_double, u_simple) = fold_data(params)?;
    let &ModelParams { a, m, q, s } = params;
    let t = analysis.t;

    let transversality = s * (1.0 + a + m - u_simple) / (2.0 * q);
    let nondegeneracy =
        -2.0 * s * (2.0 + a - m) * (1.0 + a + m - u_simple) / (q * (u_simple - t));

    // Left null vector U of J at the collapse (normalised second component),
    // right null vector V = (1, 1).
    let u1 = s * (1.0 + a + m - u_simple) / (q * (u_simple - t));
    let uv_product = u1 + 1.0;

    // Measured U . D2F(V, V) by a central second difference along V.
    let h = 1e-4;
    let x = State::new(u_double, u_double);
    let fp = model::field_raw(State::new(x.u + h, x.v + h), params);
    let f0 = model::field_raw(x, params);
    let fm = model::field_raw(State::new(x.u - h, x.v - h), params);
    let d2 = (
        (fp.0 - 2.0 * f0.0 + fm.0) / (h * h),
        (fp.1 - 2.0 * f0.1 + fm.1) / (h * h),
    );
    let measured_second_directional = u1 * d2.0 + d2.1;

    let genuine = transversality.abs() > 1e-12 && nondegeneracy.abs() > 1e-12;

    Ok(SotomayorReport {
        q,
        s,
        u_double,
        transversality,
        nondegeneracy,
        measured_second_directional,
        uv_product,
        genuine,
    })
}

/// Nilpotency check at each Bogdanov-Takens point of `(A, M)`.
///
/// At `(Q, S) = (Q_fold, S_BT)` the Jacobian at the collapsed equilibrium is
/// `c [[1, -1], [1, -1]]`; conjugating with `Y = [[1, -1], [1, 0]]` moves it
/// to the nilpotent normal form with a single entry of magnitude `c` in the
/// upper-right corner.
pub fn cusp_check(a: f64, m: f64) -> Result<Vec<CuspReport>> {
    let points = bt_points(a, m);
    if points.is_empty() {
        return Err(Error::Precondition(format!(
            "no Bogdanov-Takens points at (A, M) = ({a}, {m}): the fold curve is empty"
        )));
    }
    points
        .into_iter()
        .map(|bt| {
            let params = ModelParams::new(a, m, bt.q, bt.s)?;
            let u = bt.u_double;
            let jac = model::jacobian(State::new(u, u), &params)?;
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            let trace = jac[0][0] + jac[1][1];
            // Y^-1 J Y with Y = [[1, -1], [1, 0]], Y^-1 = [[0, 1], [-1, 1]].
            let y = [[1.0, -1.0], [1.0, 0.0]];
            let y_inv = [[0.0, 1.0], [-1.0, 1.0]];
            let mut jy = [[0.0; 2]; 2];
            let mut nil = [[0.0; 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    jy[r][c] = jac[r][0] * y[0][c] + jac[r][1] * y[1][c];
                }
            }
            for r in 0..2 {
                for c in 0..2 {
                    nil[r][c] = y_inv[r][0] * jy[0][c] + y_inv[r][1] * jy[1][c];
                }
            }
            Ok(CuspReport {
                bt,
                jacobian: jac,
                det,
                trace,
                nilpotent: nil,
                nilpotent_entry: nil[0][1],
                scale: params.q * u * u,
            })
        })
        .collect()
}

/// Classifies the equilibrium configuration at one parameter point.
pub fn region_classify(params: &ModelParams) -> RegionLabel {
    let eqs = equilibria::positive_equilibria(params);
    RegionLabel {
        count: eqs.len(),
        kinds: eqs.iter().map(|e| e.kind).collect(),
    }
}

/// Classified equilibria at one parameter point (ascending in `u`); shared
/// by renderers that need positions alongside the labels.
pub fn region_equilibria(params: &ModelParams) -> Vec<Equilibrium> {
    equilibria::positive_equilibria(params)
}

/// Samples a full bifurcation diagram over the window: fold lines, Hopf
/// curve, BT points, and a `resolution x resolution` grid of region labels
/// at cell centres (computed in parallel, collected in deterministic
/// row-major order).
pub fn diagram(a: f64, m: f64, window: Window, resolution: usize) -> Result<BifurcationDiagram> {
    if resolution == 0 {
        return Err(Error::InvalidParameter(
            "diagram resolution must be at least 1".into(),
        ));
    }
    let fold_lines = equilibria::saddle_node_thresholds(a, m)
        .into_iter()
        .filter(|th| th.q >= window.q_min && th.q <= window.q_max)
        .collect();
    let curve_n = (8 * resolution).max(512);
    let hopf = hopf_curve(a, m, curve_n)?
        .into_iter()
        .filter(|p| {
            p.q >= window.q_min && p.q <= window.q_max && p.s >= window.s_min && p.s <= window.s_max
        })
        .collect();
    let bt = bt_points(a, m);

    let dq = (window.q_max - window.q_min) / resolution as f64;
    let ds = (window.s_max - window.s_min) / resolution as f64;
    let regions: Vec<RegionLabel> = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let i = idx % resolution;
            let j = idx / resolution;
            let q = window.q_min + (i as f64 + 0.5) * dq;
            let s = window.s_min + (j as f64 + 0.5) * ds;
            match ModelParams::new(a, m, q, s) {
                Ok(p) => region_classify(&p),
                Err(_) => RegionLabel { count: 0, kinds: Vec::new() },
            }
        })
        .collect();

    Ok(BifurcationDiagram {
        a,
        m,
        window,
        fold_lines,
        hopf_curve: hopf,
        bt_points: bt,
        resolution,
        regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn hopf_curve_is_sorted_and_on_threshold() {
        let curve = hopf_curve(0.1, -0.1, 2048).unwrap();
        assert!(curve.len() > 100);
        for w in curve.windows(2) {
            assert!(w[0].q <= w[1].q);
        }
        // Every point parametrises an equilibrium with zero trace.
        for pt in curve.iter().step_by(97) {
            let params = ModelParams::new(0.1, -0.1, pt.q, pt.s).unwrap();
            let eqs = equilibria::positive_equilibria(&params);
            let at = eqs
                .iter()
                .min_by(|x, y| {
                    (x.state.u - pt.u)
                        .abs()
                        .partial_cmp(&(y.state.u - pt.u).abs())
                        .unwrap()
                })
                .unwrap();
            assert_abs_diff_eq!(at.state.u, pt.u, epsilon = 1e-9);
            assert!(at.trace.abs() < 1e-10, "trace {} at u {}", at.trace, pt.u);
            assert!(at.det > 0.0);
        }
    }

    #[test]
    fn bt_points_sit_on_both_curves() {
        let points = bt_points(0.1, -0.1);
        assert_eq!(points.len(), 2);
        // Frozen values for (A, M) = (1/10, -1/10).
        assert_abs_diff_eq!(points[0].s, 0.20527864045000419, epsilon = 1e-12);
        assert_abs_diff_eq!(points[1].s, 0.2947213595499958, epsilon = 1e-12);
        for bt in points {
            let params = ModelParams::new(0.1, -0.1, bt.q, bt.s).unwrap();
            let eq = equilibria::collapsed_classification(&params).unwrap();
            assert!(eq.det.abs() < 1e-9, "det {} at BT", eq.det);
            assert!(eq.trace.abs() < 1e-9, "trace {} at BT", eq.trace);
        }
    }

    #[test]
    fn bt_matches_the_printed_quotient_form_up_to_sign() {
        // |Q (u* - T) / (1 + A + M - u*)| equals the BT threshold; the
        // quotient itself is negative because u* < T at both folds.
        for bt in bt_points(0.1, -0.1) {
            let t = 0.8;
            let u_simple = t - 2.0 * bt.u_double;
            let quotient = bt.q * (u_simple - t) / (1.0 + 0.1 - 0.1 - u_simple);
            assert!(quotient < 0.0);
            assert_relative_eq!(quotient.abs(), bt.s, max_relative = 1e-10);
        }
    }

    #[test]
    fn sotomayor_scalars_are_nonzero_on_both_folds() {
        for th in equilibria::saddle_node_thresholds(0.1, -0.1) {
            let params = ModelParams::new(0.1, -0.1, th.q, 0.25).unwrap();
            let report = sotomayor_check(&params).unwrap();
            assert!(report.genuine);
            assert!(report.transversality.abs() > 1e-3);
            assert!(report.nondegeneracy.abs() > 1e-3);
            assert!(report.measured_second_directional.abs() > 1e-3);
        }
    }

    #[test]
    fn sotomayor_requires_a_fold() {
        let params = ModelParams::new(0.1, -0.1, 0.363, 0.25).unwrap();
        assert!(sotomayor_check(&params).is_err());
    }

    /// The measured second directional derivative equals
    /// `U1 * u_d^2 * phi''(u_d)` analytically; the closed-form scalar uses
    /// `phi''` evaluated at `u = 1` instead, so the two differ away from
    /// `u_d = 1` while both stay nonzero. Document that numerically.
    #[test]
    fn measured_second_derivative_matches_its_analytic_value() {
        let th = &equilibria::saddle_node_thresholds(0.1, -0.1)[1];
        let params = ModelParams::new(0.1, -0.1, th.q, 0.25).unwrap();
        let report = sotomayor_check(&params).unwrap();
        let u_d = report.u_double;
        let u1 = -params.s * (u_d + params.a) / (params.q * u_d);
        // phi''(u) = 2T - 6u.
        let phi_second = 2.0 * (1.0 - params.a + params.m) - 6.0 * u_d;
        let analytic = u1 * u_d * u_d * phi_second;
        assert_relative_eq!(
            report.measured_second_directional,
            analytic,
            max_relative = 1e-5
        );
        // Different from the closed form, but both nonzero.
        assert!(report.nondegeneracy.abs() > 1e-3);
        assert!(
            (report.nondegeneracy - report.measured_second_directional).abs() > 1e-2,
            "the closed form and the measured value are distinct quantities"
        );
    }

    #[test]
    fn uv_product_vanishes_exactly_at_bt() {
        for bt in bt_points(0.1, -0.1) {
            let params = ModelParams::new(0.1, -0.1, bt.q, bt.s).unwrap();
            let report = sotomayor_check(&params).unwrap();
            assert!(report.uv_product.abs() < 1e-9, "U.V = {}", report.uv_product);
            // Off the BT value the product is healthy.
            let off = ModelParams::new(0.1, -0.1, bt.q, 0.25).unwrap();
            let report = sotomayor_check(&off).unwrap();
            assert!(report.uv_product.abs() > 1e-3);
        }
    }

    #[test]
    fn cusp_reports_are_nilpotent_with_entry_of_magnitude_c() {
        let reports = cusp_check(0.1, -0.1).unwrap();
        assert_eq!(reports.len(), 2);
        for rep in reports {
            assert!(rep.det.abs() < 1e-12);
            assert!(rep.trace.abs() < 1e-12);
            assert!(rep.nilpotent[0][0].abs() < 1e-10);
            assert!(rep.nilpotent[1][0].abs() < 1e-10);
            assert!(rep.nilpotent[1][1].abs() < 1e-10);
            assert!(rep.nilpotent_entry.abs() > 1e-3);
            assert_relative_eq!(rep.nilpotent_entry.abs(), rep.scale, max_relative = 1e-10);
            // Honest arithmetic lands the entry at -c.
            assert!(rep.nilpotent_entry < 0.0);
        }
    }

    #[test]
    fn diagram_partitions_the_reference_window() {
        let window = Window::new(0.30, 0.42, 0.05, 0.45).unwrap();
        let d = diagram(0.1, -0.1, window, 24).unwrap();
        assert_eq!(d.regions.len(), 24 * 24);
        assert_eq!(d.fold_lines.len(), 2);
        assert!(!d.hopf_curve.is_empty());
        assert_eq!(d.bt_points.len(), 2);
        // The window straddles both folds: all three counts appear.
        let counts: std::collections::BTreeSet<usize> =
            d.regions.iter().map(|r| r.count).collect();
        assert!(counts.contains(&1) && counts.contains(&3));
    }

    #[test]
    fn window_validation_rejects_bad_bounds() {
        assert!(Window::new(0.0, 0.4, 0.0, 0.4).is_err());
        assert!(Window::new(0.4, 0.3, 0.0, 0.4).is_err());
        assert!(Window::new(0.3, 0.4, -0.1, 0.4).is_err());
        assert!(Window::new(0.3, 0.4, 0.4, 0.4).is_err());
        assert!(Window::new(0.3, f64::INFINITY, 0.0, 0.4).is_err());
    }
}
