//! Shared oracles for the integration tests.
//!
//! Everything here recomputes quantities through routes that are deliberately
//! different from the library's own algebra: sign scans instead of closed-form
//! root finding, finite differences instead of analytic derivatives, Newton
//! refinement on raw residuals instead of reduced one-dimensional conditions.
//! Agreement between the two routes is the evidence the tests rest on.
#![allow(dead_code)]

use allee_core::model::{vector_field, ModelParams, State};

/// The prey nullcline factor `phi(u) = (u + A)(1 - u)(u - M)` in product
/// form, avoiding the expanded cubic coefficients the library uses.
pub fn phi_product(u: f64, a: f64, m: f64) -> f64 {
    (u + a) * (1.0 - u) * (u - m)
}

/// Interior equilibria solve `phi(u) - Q u = 0`; this residual is the
/// oracle's notion of "is an equilibrium", independent of the monic cubic.
pub fn equilibrium_residual(u: f64, a: f64, m: f64, q: f64) -> f64 {
    phi_product(u, a, m) - q * u
}

/// Counts sign changes of the equilibrium residual over a uniform grid on
/// `(0, 1)`. With enough points this equals the number of simple interior
/// equilibria; double roots (tangencies) are invisible to it, which the
/// callers exploit when bracketing fold thresholds.
pub fn sign_scan_root_count(a: f64, m: f64, q: f64, n: usize) -> usize {
    let mut count = 0;
    let mut prev = equilibrium_residual(1e-9, a, m, q);
    for i in 1..=n {
        let u = i as f64 / (n as f64 + 1.0);
        let here = equilibrium_residual(u, a, m, q);
        if prev != 0.0 && here != 0.0 && (prev < 0.0) != (here < 0.0) {
            count += 1;
        }
        prev = here;
    }
    count
}

/// Locations of the sign changes found by [`sign_scan_root_count`], refined
/// by bisection to `1e-13`.
pub fn sign_scan_roots(a: f64, m: f64, q: f64, n: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let grid = |i: usize| (i as f64) / (n as f64 + 1.0);
    let mut prev_u = 1e-9;
    let mut prev = equilibrium_residual(prev_u, a, m, q);
    for i in 1..=n {
        let u = grid(i);
        let here = equilibrium_residual(u, a, m, q);
        if prev != 0.0 && here != 0.0 && (prev < 0.0) != (here < 0.0) {
            let (mut lo, mut hi) = (prev_u, u);
            let mut flo = prev;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = equilibrium_residual(mid, a, m, q);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-13 {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_u = u;
        prev = here;
    }
    roots
}

/// Full discriminant of `a x^3 + b x^2 + c x + d`:
/// `18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2`. Positive for three distinct
/// real roots, zero at a repeated root, negative for one real root.
pub fn cubic_discriminant(a: f64, b: f64, c: f64, d: f64) -> f64 {
    18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c
        - 4.0 * a * c * c * c
        - 27.0 * a * a * d * d
}

/// Central-difference Jacobian of the nondimensional field.
pub fn fd_jacobian(state: State, params: &ModelParams, h: f64) -> [[f64; 2]; 2] {
    let f = |u: f64, v: f64| vector_field(State::new(u, v), params).unwrap();
    let (du_p, dv_p) = f(state.u + h, state.v);
    let (du_m, dv_m) = f(state.u - h, state.v);
    let (du_q, dv_q) = f(state.u, state.v + h);
    let (du_r, dv_r) = f(state.u, state.v - h);
    [
        [(du_p - du_m) / (2.0 * h), (du_q - du_r) / (2.0 * h)],
        [(dv_p - dv_m) / (2.0 * h), (dv_q - dv_r) / (2.0 * h)],
    ]
}

fn det2(j: &[[f64; 2]; 2]) -> f64 {
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

fn tr2(j: &[[f64; 2]; 2]) -> f64 {
    j[0][0] + j[1][1]
}

/// Newton refinement of a codimension-two degeneracy: solves for `(u, q, s)`
/// such that the diagonal point `(u, u)` is an equilibrium whose
/// finite-difference Jacobian has zero determinant and zero trace. Both the
/// residual vector and its Newton matrix come from finite differences only,
/// so this shares no algebra with the library's closed forms.
///
/// The determinant residual depends weakly on `u` near the degeneracy
/// (its `u` gradient is of order `1e-4` for the reference parameters), so
/// the iteration runs a fixed schedule and keeps the best iterate instead of
/// stopping at the first loose tolerance; anything short of a `~1e-12`
/// residual floor would leave `u` underdetermined at the `1e-8` level the
/// callers assert.
///
/// Returns `(u, q, s)` or `None` if the best iterate fails to reach
/// `max(|residuals|) <= 1e-10`.
pub fn newton_codim_two(
    a: f64,
    m: f64,
    mut u: f64,
    mut q: f64,
    mut s: f64,
) -> Option<(f64, f64, f64)> {
    let jac_h = 1e-6;
    let residual = |u: f64, q: f64, s: f64| -> Option<[f64; 3]> {
        let params = ModelParams::new(a, m, q, s).ok()?;
        let j = fd_jacobian(State::new(u, u), &params, jac_h);
        Some([equilibrium_residual(u, a, m, q), det2(&j), tr2(&j)])
    };
    let worst = |r: &[f64; 3]| r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let step = 1e-6;
    let mut best = (f64::INFINITY, (u, q, s));
    for _ in 0..40 {
        let r0 = residual(u, q, s)?;
        if worst(&r0) < best.0 {
            best = (worst(&r0), (u, q, s));
        }
        // Forward-difference Newton matrix in (u, q, s).
        let ru = residual(u + step, q, s)?;
        let rq = residual(u, q + step, s)?;
        let rs = residual(u, q, s + step)?;
        let mut mat = [[0.0f64; 3]; 3];
        for i in 0..3 {
            mat[i][0] = (ru[i] - r0[i]) / step;
            mat[i][1] = (rq[i] - r0[i]) / step;
            mat[i][2] = (rs[i] - r0[i]) / step;
        }
        let delta = solve3(&mat, &[-r0[0], -r0[1], -r0[2]])?;
        // Damp wild steps; the basin of attraction is generous but finite.
        let scale = delta.iter().map(|d| d.abs()).fold(0.0, f64::max);
        let damp = if scale > 0.05 { 0.05 / scale } else { 1.0 };
        u += damp * delta[0];
        q += damp * delta[1];
        s += damp * delta[2];
    }
    let (residual_floor, candidate) = best;
    (residual_floor <= 1e-10).then_some(candidate)
}

/// Dense 3x3 solve with partial pivoting.
fn solve3(mat: &[[f64; 3]; 3], rhs: &[f64; 3]) -> Option<[f64; 3]> {
    let mut a = *mat;
    let mut b = *rhs;
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for col in (0..3).rev() {
        let mut acc = b[col];
        for k in (col + 1)..3 {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

/// Second directional derivative of the field along `dir` by a central
/// second difference with step `h`, evaluated at `state`.
pub fn fd_second_directional(
    state: State,
    params: &ModelParams,
    dir: (f64, f64),
    h: f64,
) -> (f64, f64) {
    let eval = |t: f64| {
        vector_field(
            State::new(state.u + t * dir.0, state.v + t * dir.1),
            params,
        )
        .unwrap()
    };
    let (fp0, fp1) = eval(h);
    let (f00, f01) = eval(0.0);
    let (fm0, fm1) = eval(-h);
    ((fp0 - 2.0 * f00 + fm0) / (h * h), (fp1 - 2.0 * f01 + fm1) / (h * h))
}

/// Grid-scan maximiser with one parabolic refinement through the best
/// bracket. Accurate to roughly `(hi - lo) / n` squared in the argument,
/// which is ample to cross-check a line search to `1e-7`.
pub fn scan_maximum(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    let at = |i: usize| lo + (hi - lo) * (i as f64) / (n as f64);
    for i in 0..=n {
        let v = f(at(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == n {
        return (at(best_i), best);
    }
    let (x0, x1, x2) = (at(best_i - 1), at(best_i), at(best_i + 1));
    let (y0, y1, y2) = (f(x0), f(x1), f(x2));
    let denom = (y0 - 2.0 * y1 + y2) * 2.0;
    if denom.abs() < 1e-300 {
        return (x1, y1);
    }
    let x = x1 + (x2 - x1) * (y0 - y2) / denom;
    (x, f(x))
}

/// Closed form for the *simple* root that coexists with a double root at a
/// fold: with `T` and `L` evaluated on the fold, the surviving root is
/// `(T +- 2 sqrt(T^2 + 3L)) / 3`, the sign chosen opposite to the side of
/// the fold the double root sits on.
pub fn fold_simple_root(t: f64, l: f64, sign: f64) -> f64 {
    (t + sign * 2.0 * (t * t + 3.0 * l).sqrt()) / 3.0
}
