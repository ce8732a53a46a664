//! Equilibrium structure of the nondimensional system.
//!
//! Positive equilibria lie on the diagonal `v = u` at roots of the monic
//! cubic `g(u) = u^3 - T u^2 - L u + A M` inside `(0, 1)`, where
//! `T = 1 - A + M` and `L = A(M+1) - Q - M`. Since `g(0) = AM < 0` and
//! `g(1) = Q > 0` in the weak-Allee regime, the count in `(0, 1)` is one or
//! three (with multiplicity). Folds (saddle-node collapses) happen where `g`
//! has a double root, i.e. on the curve `2u^3 - T u^2 - A M = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{self, ModelParams, State};

/// How the root count of the equilibrium cubic is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicCase {
    /// A single positive equilibrium, forced structurally (`T <= 0` or
    /// `L >= 0`).
    I,
    /// `T > 0`, `L < 0`, deflated discriminant negative: still one positive
    /// equilibrium.
    IIi,
    /// `T > 0`, `L < 0`, deflated discriminant nonnegative: three positive
    /// equilibria counted with multiplicity.
    IIii,
}

impl std::fmt::Display for CubicCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CubicCase::I => write!(f, "I"),
            CubicCase::IIi => write!(f, "II.i"),
            CubicCase::IIii => write!(f, "II.ii"),
        }
    }
}

/// A root of the equilibrium cubic inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoot {
    pub u: f64,
    /// 1 for a simple root, 2 at a fold, 3 at the cusp-of-the-fold.
    pub multiplicity: u8,
}

/// Full description of the equilibrium cubic at one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicAnalysis {
    /// `T = 1 - A + M`.
    pub t: f64,
    /// `L = A(M+1) - Q - M`.
    pub l: f64,
    /// Monic coefficients `[1, -T, -L, AM]` of `g`.
    pub coefficients: [f64; 4],
    /// Deflation discriminant `(u* - T)^2 - 4(u*(u* - T) - L)` computed with
    /// the smallest real root `u*`; values within `1e-12` of zero are
    /// snapped to zero.
    pub delta: f64,
    /// Case tag deduced from the signs of `T`, `L`, and `delta`.
    pub case: CubicCase,
    /// Roots inside `(0, 1)`, ascending, merged by multiplicity.
    pub roots: Vec<CubicRoot>,
}

/// Separation below which two numerical roots are treated as one root of
/// higher multiplicity.
pub const ROOT_MERGE_TOL: f64 = 1e-7;
/// Dead band for snapping the deflation discriminant to zero.
pub const DELTA_TOL: f64 = 1e-12;
/// Dead band on `|S - f(u)|` inside which a focus is reported as marginal
/// rather than guessing the side of the Hopf threshold.
pub const TRACE_TOL: f64 = 1e-9;
/// Dead band on the determinant factor inside which a simple root is
/// flagged as numerically indistinguishable from a fold.
pub const FOLD_TOL: f64 = 1e-12;

/// Evaluates `g(u) = u^3 - T u^2 - L u + A M`.
pub fn cubic_value(u: f64, params: &ModelParams) -> f64 {
    ((u - params.t()) * u - params.l()) * u + params.a * params.m
}

fn cubic_derivative(u: f64, t: f64, l: f64) -> f64 {
    (3.0 * u - 2.0 * t) * u - l
}

/// All real roots of the monic cubic `u^3 + b u^2 + c u + d`, ascending.
fn real_roots_monic_cubic(b: f64, c: f64, d: f64) -> Vec<f64> {
    // Depressed form: u = w - b/3, w^3 + p w + q.
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    // Near a double root the discriminant is a catastrophic cancellation of
    // the two magnitudes below; a tiny positive value then means "complex
    // pair with negligible imaginary part", which we want resolved as a
    // repeated real root so fold detection can see it. Route those to the
    // trigonometric branch, whose clamped `acos` degrades exactly to the
    // double point.
    let disc_scale = (q / 2.0) * (q / 2.0) + (p / 3.0).abs().powi(3);
    let mut roots = if disc > 1e-13 * disc_scale {
        // One real root; the stable Cardano form avoids cancellation.
        let s = disc.sqrt();
        let t1 = -q / 2.0 + s;
        let t2 = -q / 2.0 - s;
        vec![shift + t1.cbrt() + t2.cbrt()]
    } else {
        // Three real roots (possibly repeated); disc <= 0 forces p <= 0.
        let rho = 2.0 * (-p / 3.0).max(0.0).sqrt();
        let arg = if rho == 0.0 {
            // Triple root of the depressed cubic.
            0.0
        } else {
            (3.0 * q / (p * rho)).clamp(-1.0, 1.0)
        };
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| shift + rho * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    };
    // Newton polish on the original cubic. Steps are accepted only when they
    // reduce |g|: near a double root the derivative is tiny and raw Newton
    // would fling the paired roots apart, which must not happen or the
    // multiplicity merge below the caller misses the fold. Merged roots get
    // re-polished on g' by the caller, where the problem is well conditioned.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let g = ((*r + b) * *r + c) * *r + d;
            let dg = (3.0 * *r + 2.0 * b) * *r + c;
            if dg.abs() < 1e-300 {
                break;
            }
            let step = (g / dg).clamp(-1e-2, 1e-2);
            let cand = *r - step;
            let g_cand = ((cand + b) * cand + c) * cand + d;
            if g_cand.abs() > g.abs() {
                break;
            }
            *r = cand;
            if step.abs() < 1e-16 {
                break;
            }
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Analyses the equilibrium cubic: roots in `(0, 1)` with multiplicities,
/// the deflation discriminant, and the case tag.
pub fn cubic_analysis(params: &ModelParams) -> CubicAnalysis {
    let t = params.t();
    let l = params.l();
    let am = params.a * params.m;
    let raw = real_roots_monic_cubic(-t, -l, am);

    // Merge clusters closer than the collapse tolerance into multiple roots.
    let mut merged: Vec<CubicRoot> = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let mut j = i + 1;
        while j < raw.len() && raw[j] - raw[j - 1] < ROOT_MERGE_TOL {
            j += 1;
        }
        let mult = (j - i) as u8;
        let u = match mult {
            1 => raw[i],
            2 => {
                // A double root solves g'(u) = 0; Newton on g' is well
                // conditioned where g itself is flat.
                let mut u = 0.5 * (raw[i] + raw[j - 1]);
                for _ in 0..40 {
                    let dg = cubic_derivative(u, t, l);
                    let ddg = 6.0 * u - 2.0 * t;
                    if ddg.abs() < 1e-300 {
                        break;
                    }
                    let step = dg / ddg;
                    u -= step;
                    if step.abs() < 1e-16 {
                        break;
                    }
                }
                u
            }
            _ => t / 3.0, // triple root sits at the inflection g''(u) = 0
        };
        merged.push(CubicRoot { u, multiplicity: mult });
        i = j;
    }

    // Deflation discriminant from the smallest real root.
    let delta = if let Some(&u_star) = raw.first() {
        let d = (u_star - t) * (u_star - t) - 4.0 * (u_star * (u_star - t) - l);
        if d.abs() < DELTA_TOL {
            0.0
        } else {
            d
        }
    } else {
        f64::NAN
    };

    let case = if t <= 0.0 || l >= 0.0 {
        CubicCase::I
    } else if delta < 0.0 {
        CubicCase::IIi
    } else {
        CubicCase::IIii
    };

    let roots = merged
        .into_iter()
        .filter(|r| r.u > 0.0 && r.u < 1.0)
        .collect();

    CubicAnalysis {
        t,
        l,
        coefficients: [1.0, -t, -l, am],
        delta,
        case,
        roots,
    }
}

/// Stability classes for equilibria of the planar system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    /// Degenerate point whose linearisation vanishes but whose blow-up shows
    /// saddle sectors (the origin).
    NonHyperbolicSaddle,
    Saddle,
    Attractor,
    Repeller,
    /// Fold point whose centre manifold attracts.
    StableSaddleNode,
    /// Fold point whose centre manifold repels.
    UnstableSaddleNode,
    /// Codimension-two degeneracy (fold with vanishing trace, or a triple
    /// root of the equilibrium cubic).
    Cusp,
    /// Simple equilibrium sitting on the Hopf threshold within tolerance.
    Marginal,
}

impl std::fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            EquilibriumKind::NonHyperbolicSaddle => "non-hyperbolic-saddle",
            EquilibriumKind::Saddle => "saddle",
            EquilibriumKind::Attractor => "attractor",
            EquilibriumKind::Repeller => "repeller",
            EquilibriumKind::StableSaddleNode => "stable-saddle-node",
            EquilibriumKind::UnstableSaddleNode => "unstable-saddle-node",
            EquilibriumKind::Cusp => "cusp",
            EquilibriumKind::Marginal => "marginal",
        };
        write!(f, "{label}")
    }
}

/// A classified equilibrium of the nondimensional system.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub state: State,
    pub kind: EquilibriumKind,
    pub eigenvalues: [Complex64; 2],
    pub det: f64,
    pub trace: f64,
    /// Multiplicity of the underlying cubic root (1 away from folds).
    pub multiplicity: u8,
    /// Set when a simple root's determinant factor is inside the fold dead
    /// band, so the hyperbolic classification is numerically fragile.
    pub near_fold: bool,
}

/// Eigenvalues of a 2x2 matrix from its trace and determinant.
fn eigenvalues_2x2(trace: f64, det: f64) -> [Complex64; 2] {
    let half = 0.5 * trace;
    let disc = half * half - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [Complex64::new(half - s, 0.0), Complex64::new(half + s, 0.0)]
    } else {
        let s = (-disc).sqrt();
        [Complex64::new(half, -s), Complex64::new(half, s)]
    }
}

/// Hopf threshold function `f(u) = u phi'(u) / (A + u)`: a simple positive
/// equilibrium at `u` is an attractor iff `S > f(u)` and a repeller iff
/// `S < f(u)` (when it is not a saddle).
pub fn hopf_function(u: f64, params: &ModelParams) -> f64 {
    u * model::phi_prime(u, params.a, params.m) / (params.a + u)
}

/// Maximum of the Hopf threshold over `u` in `(0, 1)` by golden-section
/// search; returns `(u_max, f_max)`.
pub fn hopf_maximum(params: &ModelParams) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-12, 1.0 - 1e-12);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = hopf_function(x1, params);
    let mut f2 = hopf_function(x2, params);
    for _ in 0..120 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = hopf_function(x2, params);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = hopf_function(x1, params);
        }
    }
    let u = 0.5 * (lo + hi);
    (u, hopf_function(u, params))
}

/// Determinant factor `D(u) = u^2 (2u - T) - A M`. At a root of the cubic,
/// `det J = S u^2 (A + u) D(u)`, so the sign of `D` separates saddles
/// (`D < 0`) from antisaddles (`D > 0`) and vanishes exactly at folds.
pub fn det_factor(u: f64, params: &ModelParams) -> f64 {
    u * u * (2.0 * u - params.t()) - params.a * params.m
}

/// Which pair of equilibria merges at a fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldSide {
    /// The two lowest equilibria collapse (double root below `T/3`).
    Lower,
    /// The two highest equilibria collapse (double root above `T/3`).
    Upper,
    /// All three collapse (`u = T/3`, the cusp of the fold curve).
    Triple,
}

/// One fold (saddle-node) threshold in `Q` at fixed `(A, M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleNodeThreshold {
    /// Critical predation strength.
    pub q: f64,
    /// Abscissa of the double root at the collapse.
    pub u_double: f64,
    pub side: FoldSide,
}

/// Fold thresholds of the equilibrium cubic at fixed `(A, M)`, sorted by
/// `Q`. In the weak-Allee regime there are two (or none); the degenerate
/// tangency `T^3 = -27AM` yields the single [`FoldSide::Triple`] entry.
pub fn saddle_node_thresholds(a: f64, m: f64) -> Vec<SaddleNodeThreshold> {
    let t = 1.0 - a + m;
    let am = a * m;
    if t <= 0.0 {
        return Vec::new();
    }
    // Double roots solve h(u) = 2u^3 - T u^2 - AM = 0 with h'(u) = 0 ..
    // h has interior critical point at u = T/3; real double roots require
    // h(T/3) <= 0, i.e. T^3 + 27 AM >= 0.
    let cusp_margin = t * t * t + 27.0 * am;
    let q_at = |u: f64| {
        // L at the fold: L = 3u^2 - 2Tu, and Q = A(M+1) - M - L.
        a * (m + 1.0) - m - (3.0 * u - 2.0 * t) * u
    };
    let h = |u: f64| (2.0 * u - t) * u * u - am;
    let solve = |mut lo: f64, mut hi: f64| {
        // Bisection (sign change guaranteed by the caller) plus a Newton
        // polish for the last digits.
        let flo = h(lo);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if (h(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..4 {
            let dh = (6.0 * u - 2.0 * t) * u;
            if dh.abs() < 1e-300 {
                break;
            }
            u -= h(u) / dh;
        }
        u
    };

    if m < 0.0 {
        if cusp_margin < 0.0 {
            return Vec::new();
        }
        if cusp_margin == 0.0 {
            let u = t / 3.0;
            return vec![SaddleNodeThreshold { q: q_at(u), u_double: u, side: FoldSide::Triple }];
        }
        // h(0) = -AM > 0, h(T/3) < 0, h(T/2) = -AM > 0: one root on each
        // side of T/3.
        let u_lo = solve(1e-300, t / 3.0);
        let u_hi = solve(t / 3.0, t / 2.0);
        let mut out = vec![
            SaddleNodeThreshold { q: q_at(u_lo), u_double: u_lo, side: FoldSide::Lower },
            SaddleNodeThreshold { q: q_at(u_hi), u_double: u_hi, side: FoldSide::Upper },
        ];
        out.sort_by(|x, y| x.q.partial_cmp(&y.q).unwrap());
        out
    } else {
        // M >= 0 (outside the weak-Allee scope): h(T/2) = -AM <= 0 and h is
        // increasing beyond T/3, so there is exactly one double root, above
        // T/2. It only bounds a fold if it lies below 1.
        let mut hi = t.max(1.0);
        while h(hi) <= 0.0 {
            hi *= 2.0;
        }
        let u = solve(t / 3.0, hi);
        if u < 1.0 {
            vec![SaddleNodeThreshold { q: q_at(u), u_double: u, side: FoldSide::Upper }]
        } else {
            Vec::new()
        }
    }
}

fn classify_root(root: &CubicRoot, analysis: &CubicAnalysis, params: &ModelParams) -> Equilibrium {
    let u = root.u;
    let state = State::new(u, u);
    let jac = model::jacobian(state, params).expect("finite equilibrium state");
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let trace = jac[0][0] + jac[1][1];
    let eigenvalues = eigenvalues_2x2(trace, det);

    let (kind, near_fold) = match root.multiplicity {
        1 => {
            let d = det_factor(u, params);
            let near_fold = d.abs() < FOLD_TOL;
            let kind = if d < 0.0 {
                EquilibriumKind::Saddle
            } else {
                let f = hopf_function(u, params);
                if (params.s - f).abs() < TRACE_TOL {
                    EquilibriumKind::Marginal
                } else if params.s < f {
                    EquilibriumKind::Repeller
                } else {
                    EquilibriumKind::Attractor
                }
            };
            (kind, near_fold)
        }
        2 => {
            // Fold: the centre-manifold attractivity is decided by the trace,
            // expressed through the collapse-side threshold in S.
            let threshold = match collapse_side(u, analysis) {
                FoldSide::Lower => params.q * u / (params.a + u),
                _ => {
                    let u_simple = analysis
                        .roots
                        .iter()
                        .find(|r| r.multiplicity == 1)
                        .map(|r| r.u)
                        .unwrap_or(analysis.t - 2.0 * u);
                    params.q * (analysis.t - u_simple)
                        / (1.0 + params.a + params.m - u_simple)
                }
            };
            let kind = if (params.s - threshold).abs() < TRACE_TOL {
                EquilibriumKind::Cusp
            } else if params.s < threshold {
                EquilibriumKind::UnstableSaddleNode
            } else {
                EquilibriumKind::StableSaddleNode
            };
            (kind, false)
        }
        _ => (EquilibriumKind::Cusp, false),
    };

    Equilibrium {
        state,
        kind,
        eigenvalues,
        det,
        trace,
        multiplicity: root.multiplicity,
        near_fold,
    }
}

fn collapse_side(u_double: f64, analysis: &CubicAnalysis) -> FoldSide {
    let pivot = analysis.t / 3.0;
    if (u_double - pivot).abs() < ROOT_MERGE_TOL {
        FoldSide::Triple
    } else if u_double < pivot {
        FoldSide::Lower
    } else {
        FoldSide::Upper
    }
}

/// All positive equilibria, ascending in `u`, fully classified.
pub fn positive_equilibria(params: &ModelParams) -> Vec<Equilibrium> {
    let analysis = cubic_analysis(params);
    analysis
        .roots
        .iter()
        .map(|r| classify_root(r, &analysis, params))
        .collect()
}

/// The two boundary equilibria `(0, 0)` and `(1, 0)`.
///
/// The origin has an identically zero linearisation; the blow-up chart shows
/// it is a non-hyperbolic saddle. `(1, 0)` is always a hyperbolic saddle
/// with `det J = -S (1 - M)(1 + A)^2 < 0`.
pub fn boundary_equilibria(params: &ModelParams) -> [Equilibrium; 2] {
    let origin = Equilibrium {
        state: State::new(0.0, 0.0),
        kind: EquilibriumKind::NonHyperbolicSaddle,
        eigenvalues: [Complex64::new(0.0, 0.0); 2],
        det: 0.0,
        trace: 0.0,
        multiplicity: 1,
        near_fold: false,
    };
    let state = State::new(1.0, 0.0);
    let jac = model::jacobian(state, params).expect("finite boundary state");
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let trace = jac[0][0] + jac[1][1];
    let corner = Equilibrium {
        state,
        kind: EquilibriumKind::Saddle,
        eigenvalues: eigenvalues_2x2(trace, det),
        det,
        trace,
        multiplicity: 1,
        near_fold: false,
    };
    [origin, corner]
}

/// Classification of a collapsed (multiplicity >= 2) equilibrium.
///
/// Precondition: the cubic actually has a root of multiplicity at least two
/// at these parameters (within the collapse tolerance); otherwise this is a
/// precondition error.
pub fn collapsed_classification(params: &ModelParams) -> Result<Equilibrium> {
    let analysis = cubic_analysis(params);
    match analysis.roots.iter().find(|r| r.multiplicity >= 2) {
        Some(root) => Ok(classify_root(root, &analysis, params)),
        None => Err(Error::Precondition(format!(
            "no collapsed equilibrium at (A, M, Q) = ({}, {}, {}); the cubic has no root \
             of multiplicity >= 2 within tolerance",
            params.a, params.m, params.q
        ))),
    }
}
