//! Model definition: parameters, states, vector fields, and the blow-up
//! chart that resolves the degenerate origin.
//!
//! Two formulations coexist. The dimensional system tracks prey `N` and
//! predators `P` with seven positive rates; the nondimensional system tracks
//! `(u, v) = (N/K, P/(hK))` after a state-dependent time rescaling
//! `dt = u(u + A)/(rK) dtau`. The rescaling is positive for `u > 0`, so the
//! two systems share orbits (as curves) even though their time
//! parametrisations differ.

use crate::error::{Error, Result};

/// Nondimensional parameter set.
///
/// `A = a/K`, `M = m/K`, `Q = qh/(rK)`, `S = s/(rK)`. The weak-Allee regime
/// is `M < 0`; `M >= 0` is accepted (the algebra goes through) but callers
/// can detect it via [`ModelParams::weak_allee`] and warn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub a: f64,
    pub m: f64,
    pub q: f64,
    pub s: f64,
}

impl ModelParams {
    /// Validates `A` in (0,1), `Q > 0`, `S > 0`, and finiteness of all four.
    pub fn new(a: f64, m: f64, q: f64, s: f64) -> Result<Self> {
        for (name, value) in [("A", a), ("M", m), ("Q", q), ("S", s)] {
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("parameter {name} = {value}")));
            }
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "A must lie in (0, 1), got {a}"
            )));
        }
        if q <= 0.0 {
            return Err(Error::InvalidParameter(format!("Q must be positive, got {q}")));
        }
        if s <= 0.0 {
            return Err(Error::InvalidParameter(format!("S must be positive, got {s}")));
        }
        Ok(Self { a, m, q, s })
    }

    /// `true` when the Allee threshold is negative (the regime the analysis
    /// is built for). `M >= 0` still computes but is outside that scope.
    pub fn weak_allee(&self) -> bool {
        self.m < 0.0
    }

    /// `T = 1 - A + M`, the quadratic coefficient of the equilibrium cubic.
    pub fn t(&self) -> f64 {
        1.0 - self.a + self.m
    }

    /// `L = A(M + 1) - Q - M`, the linear coefficient of the equilibrium
    /// cubic.
    pub fn l(&self) -> f64 {
        self.a * (self.m + 1.0) - self.q - self.m
    }
}

/// Nondimensional state `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub u: f64,
    pub v: f64,
}

impl State {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// Euclidean distance to another state.
    pub fn dist(&self, other: &State) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }
}

/// Dimensional parameter set `(r, K, q, a, s, h, m)`.
///
/// All of `r, K, q, a, s, h` must be positive; the Allee threshold `m` may
/// have either sign (`m < 0` is the weak-Allee regime).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalParams {
    pub r: f64,
    pub k: f64,
    pub q: f64,
    pub a: f64,
    pub s: f64,
    pub h: f64,
    pub m: f64,
}

impl DimensionalParams {
    pub fn new(r: f64, k: f64, q: f64, a: f64, s: f64, h: f64, m: f64) -> Result<Self> {
        for (name, value) in [
            ("r", r),
            ("K", k),
            ("q", q),
            ("a", a),
            ("s", s),
            ("h", h),
            ("m", m),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("parameter {name} = {value}")));
            }
            if name != "m" && value <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        Ok(Self { r, k, q, a, s, h, m })
    }

    pub fn weak_allee(&self) -> bool {
        self.m < 0.0
    }
}

/// Dimensional state `(N, P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalState {
    pub n: f64,
    pub p: f64,
}

impl DimensionalState {
    pub fn new(n: f64, p: f64) -> Self {
        Self { n, p }
    }
}

/// `phi(u) = (u + A)(1 - u)(u - M)`, the prey growth factor. Positive
/// equilibria solve `phi(u) = Q u`.
#[inline]
pub(crate) fn phi(u: f64, a: f64, m: f64) -> f64 {
    (u + a) * (1.0 - u) * (u - m)
}

/// First derivative of `phi`.
#[inline]
pub(crate) fn phi_prime(u: f64, a: f64, m: f64) -> f64 {
    (1.0 - u) * (u - m) - (u + a) * (u - m) + (u + a) * (1.0 - u)
}

/// Raw nondimensional field, no validation. The `u = 0` and `v = 0` axes are
/// exactly invariant in floating point: every term of `du/dtau` carries a
/// `u^2` factor and every term of `dv/dtau` carries a `v` factor.
#[inline]
pub(crate) fn field_raw(state: State, p: &ModelParams) -> (f64, f64) {
    let State { u, v } = state;
    let du = u * u * (phi(u, p.a, p.m) - p.q * v);
    let dv = p.s * (u + p.a) * (u - v) * v;
    (du, dv)
}

/// Nondimensional vector field `(du/dtau, dv/dtau)`.
pub fn vector_field(state: State, params: &ModelParams) -> Result<(f64, f64)> {
    if !state.is_finite() {
        return Err(Error::NonFinite(format!(
            "state ({}, {})",
            state.u, state.v
        )));
    }
    Ok(field_raw(state, params))
}

/// 2x2 Jacobian of the nondimensional field at an arbitrary state.
pub fn jacobian(state: State, params: &ModelParams) -> Result<[[f64; 2]; 2]> {
    if !state.is_finite() {
        return Err(Error::NonFinite(format!(
            "state ({}, {})",
            state.u, state.v
        )));
    }
    let State { u, v } = state;
    let &ModelParams { a, m, q, s } = params;
    let j11 = 2.0 * u * (phi(u, a, m) - q * v) + u * u * phi_prime(u, a, m);
    let j12 = -q * u * u;
    let j21 = s * v * (2.0 * u + a - v);
    let j22 = s * (u + a) * (u - 2.0 * v);
    Ok([[j11, j12], [j21, j22]])
}

/// Dimensional vector field `(dN/dt, dP/dt)`:
///
/// ```text
/// dN/dt = r N (1 - N/K)(N - m) - q N P / (N + a)
/// dP/dt = s P (1 - P/(h N))
/// ```
///
/// The predator equation divides by `N`, so `N <= 0` is rejected.
pub fn dimensional_vector_field(
    state: DimensionalState,
    params: &DimensionalParams,
) -> Result<(f64, f64)> {
    let DimensionalState { n, p } = state;
    if !n.is_finite() || !p.is_finite() {
        return Err(Error::NonFinite(format!("state ({n}, {p})")));
    }
    if n <= 0.0 {
        return Err(Error::SingularState(n));
    }
    let dn = params.r * n * (1.0 - n / params.k) * (n - params.m) - params.q * n * p / (n + params.a);
    let dp = params.s * p * (1.0 - p / (params.h * n));
    Ok((dn, dp))
}

/// Maps dimensional parameters and state to the nondimensional system:
/// `A = a/K`, `M = m/K`, `Q = qh/(rK)`, `S = s/(rK)`, `u = N/K`,
/// `v = P/(hK)`.
pub fn nondimensionalize(
    params: &DimensionalParams,
    state: DimensionalState,
) -> Result<(ModelParams, State)> {
    let a = params.a / params.k;
    let m = params.m / params.k;
    let q = params.q * params.h / (params.r * params.k);
    let s = params.s / (params.r * params.k);
    let model = ModelParams::new(a, m, q, s)?;
    let u = state.n / params.k;
    let v = state.p / (params.h * params.k);
    Ok((model, State::new(u, v)))
}

/// Inverse state map: `N = K u`, `P = h K v`. Together with the parameter
/// identities this inverts [`nondimensionalize`] exactly.
pub fn dimensionalize(params: &DimensionalParams, state: State) -> DimensionalState {
    DimensionalState::new(params.k * state.u, params.h * params.k * state.v)
}

/// State `(x, y)` of the directional blow-up chart `u = xy`, `v = y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupState {
    pub x: f64,
    pub y: f64,
}

/// Vector field of the blow-up chart after dividing out one factor of `y`
/// (a positive time rescaling for `y > 0`):
///
/// ```text
/// dx/dt = x ( S(1 - x)(A + xy) + x(M - xy)(xy - 1)(A + xy) - Q x y )
/// dy/dt = S y (x - 1)(x y + A)
/// ```
///
/// The exceptional line `y = 0` carries the equilibria `O_xy = (0, 0)` with
/// eigenvalues `(AS, -AS)` and, when `S > -M`, `I_x = (S/(S+M), 0)`.
pub fn blowup_vector_field(state: BlowupState, params: &ModelParams) -> Result<(f64, f64)> {
    let BlowupState { x, y } = state;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite(format!("blow-up state ({x}, {y})")));
    }
    let &ModelParams { a, m, q, s } = params;
    let u = x * y;
    let dx = x * (s * (1.0 - x) * (a + u) + x * (m - u) * (u - 1.0) * (a + u) - q * u);
    let dy = s * y * (x - 1.0) * (u + a);
    Ok((dx, dy))
}

/// Character of the degenerate origin, resolved through the blow-up chart.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginReport {
    /// Eigenvalues `(AS, -AS)` of the chart equilibrium on the exceptional
    /// line that projects to the origin.
    pub chart_origin_eigenvalues: (f64, f64),
    /// Second chart equilibrium `(S/(S+M), 0)` with its eigenvalues, present
    /// iff `S > -M`.
    pub interior_chart_point: Option<(f64, f64, f64)>,
    /// The origin of the full system is a non-hyperbolic saddle: its linear
    /// part vanishes identically, but the blow-up exposes saddle dynamics.
    pub verdict: OriginVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginVerdict {
    NonHyperbolicSaddle,
}

/// Classifies the origin of the nondimensional system via the blow-up chart.
/// The verdict is always [`OriginVerdict::NonHyperbolicSaddle`]; the report
/// carries the chart data that backs it.
pub fn origin_character(params: &ModelParams) -> OriginReport {
    let &ModelParams { a, m, s, .. } = params;
    let chart_origin = (a * s, -a * s);
    let interior_chart_point = if s > -m {
        let x = s / (s + m);
        // Eigenvalues of the chart at I_x: tangent to and transverse to the
        // exceptional line.
        let lambda1 = -a * s;
        let lambda2 = -a * m * s / (m + s);
        Some((x, lambda1, lambda2))
    } else {
        None
    };
    OriginReport {
        chart_origin_eigenvalues: chart_origin,
        interior_chart_point,
        verdict: OriginVerdict::NonHyperbolicSaddle,
    }
}
