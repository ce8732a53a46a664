//! Python bindings for the predator-prey analysis library.
//!
//! The module mirrors the core API: model parameters, equilibrium
//! classification, saddle-node / Hopf / Bogdanov-Takens loci, limit-cycle
//! search, connection continuation, basin maps, and direct orbit
//! integration. Invalid inputs raise `ValueError`; numerical procedure
//! failures raise `RuntimeError`.

use allee_core::dynamics::{
    self, AttractorRef, BasinCell, ConnectionKind, CycleStability, Direction, IntegratorOptions,
    StateWindow,
};
use allee_core::model::{self, ModelParams, State};
use allee_core::{bifurcation, equilibria};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(err: allee_core::Error) -> PyErr {
    use allee_core::Error::*;
    match err {
        InvalidParameter(_) | Precondition(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

/// Rescaled model parameters `(A, M, Q, S)`.
#[pyclass(module = "allee_py", frozen)]
struct Params {
    inner: ModelParams,
}

#[pymethods]
impl Params {
    #[new]
    fn new(a: f64, m: f64, q: f64, s: f64) -> PyResult<Self> {
        ModelParams::new(a, m, q, s)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn m(&self) -> f64 {
        self.inner.m
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(a={}, m={}, q={}, s={})",
            self.inner.a, self.inner.m, self.inner.q, self.inner.s
        )
    }
}

/// A classified equilibrium of the rescaled system.
#[pyclass(module = "allee_py", frozen, get_all)]
struct Equilibrium {
    u: f64,
    v: f64,
    /// Kind label: `attractor`, `repeller`, `saddle`, `stable-saddle-node`,
    /// `unstable-saddle-node`, `non-hyperbolic-saddle`, `cusp`, or
    /// `marginal`.
    kind: String,
    det: f64,
    trace: f64,
    multiplicity: u8,
    near_fold: bool,
    eigenvalues: Vec<Complex64>,
}

#[pymethods]
impl Equilibrium {
    fn __repr__(&self) -> String {
        format!(
            "Equilibrium(kind='{}', u={}, v={})",
            self.kind, self.u, self.v
        )
    }
}

impl Equilibrium {
    fn from_core(eq: &equilibria::Equilibrium) -> Self {
        Self {
            u: eq.state.u,
            v: eq.state.v,
            kind: eq.kind.to_string(),
            det: eq.det,
            trace: eq.trace,
            multiplicity: eq.multiplicity,
            near_fold: eq.near_fold,
            eigenvalues: eq.eigenvalues.to_vec(),
        }
    }
}

/// A periodic orbit located by the Poincare-section search.
#[pyclass(module = "allee_py", frozen, get_all)]
struct Cycle {
    section_u: f64,
    section_v: f64,
    period: f64,
    /// `stable` or `unstable`.
    stability: String,
    /// Fixed-point residual of the return map at the section anchor.
    residual: f64,
    /// Sampled closed orbit as `(u, v)` pairs.
    polyline: Vec<(f64, f64)>,
}

#[pymethods]
impl Cycle {
    fn __repr__(&self) -> String {
        format!(
            "Cycle(stability='{}', period={}, section_u={})",
            self.stability, self.period, self.section_u
        )
    }
}

/// Basin-of-attraction map over a grid of initial conditions.
#[pyclass(module = "allee_py", frozen, get_all)]
struct BasinMap {
    /// `(u_min, u_max, v_min, v_max)` of the sampled window.
    window: (f64, f64, f64, f64),
    resolution: usize,
    /// Attractor descriptors `(kind, u, v, period)`; `kind` is `point`
    /// (period 0) or `cycle` (section anchor and period).
    attractors: Vec<(String, f64, f64, f64)>,
    /// Row-major with `u` varying fastest; the attractor index per cell, or
    /// -1 where no attractor was reached within the time budget.
    cells: Vec<i64>,
    undecided_fraction: f64,
}

#[pymethods]
impl BasinMap {
    /// Cell-centre coordinates for column `i`, row `j`.
    fn cell_center(&self, i: usize, j: usize) -> PyResult<(f64, f64)> {
        if i >= self.resolution || j >= self.resolution {
            return Err(PyValueError::new_err(format!(
                "cell ({i}, {j}) outside a {0}x{0} grid",
                self.resolution
            )));
        }
        let (u_min, u_max, v_min, v_max) = self.window;
        let du = (u_max - u_min) / self.resolution as f64;
        let dv = (v_max - v_min) / self.resolution as f64;
        Ok((
            u_min + (i as f64 + 0.5) * du,
            v_min + (j as f64 + 0.5) * dv,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "BasinMap(resolution={}, attractors={}, undecided_fraction={})",
            self.resolution,
            self.attractors.len(),
            self.undecided_fraction
        )
    }
}

/// Right-hand side `(du/dtau, dv/dtau)` at `(u, v)`.
#[pyfunction]
fn vector_field(params: &Params, u: f64, v: f64) -> PyResult<(f64, f64)> {
    model::vector_field(State::new(u, v), &params.inner).map_err(to_py)
}

/// Jacobian matrix of the vector field at `(u, v)` as nested lists.
#[pyfunction]
fn jacobian(params: &Params, u: f64, v: f64) -> PyResult<[[f64; 2]; 2]> {
    model::jacobian(State::new(u, v), &params.inner).map_err(to_py)
}

/// All equilibria on the closed unit square: the origin, the corner
/// `(1, 0)`, then the interior points in ascending `u`.
#[pyfunction]
fn all_equilibria(params: &Params) -> Vec<Equilibrium> {
    let [origin, corner] = equilibria::boundary_equilibria(&params.inner);
    let mut out = vec![
        Equilibrium::from_core(&origin),
        Equilibrium::from_core(&corner),
    ];
    out.extend(
        equilibria::positive_equilibria(&params.inner)
            .iter()
            .map(Equilibrium::from_core),
    );
    out
}

/// Interior (coexistence) equilibria only, ascending in `u`.
#[pyfunction]
fn interior_equilibria(params: &Params) -> Vec<Equilibrium> {
    equilibria::positive_equilibria(&params.inner)
        .iter()
        .map(Equilibrium::from_core)
        .collect()
}

/// Saddle-node thresholds in `Q` for fixed `(A, M)`, as
/// `(q, u_double, side)` with side `lower`, `upper`, or `triple`.
#[pyfunction]
fn saddle_node_thresholds(a: f64, m: f64) -> Vec<(f64, f64, String)> {
    equilibria::saddle_node_thresholds(a, m)
        .into_iter()
        .map(|t| {
            let side = match t.side {
                equilibria::FoldSide::Lower => "lower",
                equilibria::FoldSide::Upper => "upper",
                equilibria::FoldSide::Triple => "triple",
            };
            (t.q, t.u_double, side.to_string())
        })
        .collect()
}

/// Location and value of the maximum of the Hopf rate function:
/// `(u_star, s_max)`.
#[pyfunction]
fn hopf_maximum(params: &Params) -> (f64, f64) {
    equilibria::hopf_maximum(&params.inner)
}

/// Sampled Hopf locus in the `(Q, S)` plane as `(q, s, u)` triples,
/// ordered by `q`.
#[pyfunction]
fn hopf_curve(a: f64, m: f64, n: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    bifurcation::hopf_curve(a, m, n)
        .map(|pts| pts.into_iter().map(|p| (p.q, p.s, p.u)).collect())
        .map_err(to_py)
}

/// Bogdanov-Takens points as `(q, s, u_double, side)`.
#[pyfunction]
fn bt_points(a: f64, m: f64) -> Vec<(f64, f64, f64, String)> {
    bifurcation::bt_points(a, m)
        .into_iter()
        .map(|p| {
            let side = match p.side {
                equilibria::FoldSide::Lower => "lower",
                equilibria::FoldSide::Upper => "upper",
                equilibria::FoldSide::Triple => "triple",
            };
            (p.q, p.s, p.u_double, side.to_string())
        })
        .collect()
}

/// Limit cycles around the focal point `(u, v)`, ordered inside-out.
#[pyfunction]
fn limit_cycles(params: &Params, u: f64, v: f64) -> PyResult<Vec<Cycle>> {
    let cycles = dynamics::find_limit_cycles(&params.inner, State::new(u, v)).map_err(to_py)?;
    Ok(cycles
        .into_iter()
        .map(|c| Cycle {
            section_u: c.section_u,
            section_v: c.section_v,
            period: c.period,
            stability: match c.stability {
                CycleStability::Stable => "stable".to_string(),
                CycleStability::Unstable => "unstable".to_string(),
            },
            residual: c.residual,
            polyline: c.polyline.iter().map(|s| (s.u, s.v)).collect(),
        })
        .collect())
}

/// Bisect for the critical rate `S_c` of a saddle connection inside
/// `bracket`; `kind` is `heteroclinic` or `homoclinic`. Returns
/// `(s_critical, (lo, hi), section_u)`, or `None` when the separation does
/// not change sign over the bracket.
#[pyfunction]
fn connection_search(
    a: f64,
    m: f64,
    q: f64,
    bracket: (f64, f64),
    kind: &str,
) -> PyResult<Option<(f64, (f64, f64), f64)>> {
    let kind = match kind {
        "heteroclinic" => ConnectionKind::Heteroclinic,
        "homoclinic" => ConnectionKind::Homoclinic,
        other => {
            return Err(PyValueError::new_err(format!(
                "kind must be `heteroclinic` or `homoclinic`, got `{other}`"
            )))
        }
    };
    let found = dynamics::connection_search(a, m, q, bracket, kind).map_err(to_py)?;
    Ok(found.map(|r| (r.s_critical, r.bracket, r.section_u)))
}

/// Basin-of-attraction map on `resolution x resolution` cell centres over
/// `window = (u_min, u_max, v_min, v_max)`.
#[pyfunction]
#[pyo3(signature = (params, resolution = 50, window = (0.0, 1.0, 0.0, 1.0)))]
fn basins(params: &Params, resolution: usize, window: (f64, f64, f64, f64)) -> PyResult<BasinMap> {
    let sw = StateWindow::new(window.0, window.1, window.2, window.3).map_err(to_py)?;
    let grid = dynamics::basins(&params.inner, sw, resolution).map_err(to_py)?;
    Ok(BasinMap {
        window,
        resolution: grid.resolution,
        attractors: grid
            .attractors
            .iter()
            .map(|a| match a {
                AttractorRef::Point(p) => ("point".to_string(), p.u, p.v, 0.0),
                AttractorRef::Cycle {
                    section_u,
                    section_v,
                    period,
                } => ("cycle".to_string(), *section_u, *section_v, *period),
            })
            .collect(),
        undecided_fraction: grid.undecided_fraction(),
        cells: grid
            .cells
            .iter()
            .map(|c| match c {
                BasinCell::Attractor(i) => *i as i64,
                BasinCell::Undecided => -1,
            })
            .collect(),
    })
}

/// Integrate an orbit from `(u, v)` over `tau` time units and return the
/// recorded `(u, v)` samples; set `reversed=True` for backward time.
#[pyfunction]
#[pyo3(signature = (params, u, v, tau, reversed = false))]
fn integrate(params: &Params, u: f64, v: f64, tau: f64, reversed: bool) -> PyResult<Vec<(f64, f64)>> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(PyValueError::new_err(format!(
            "tau must be finite and positive, got {tau}"
        )));
    }
    let direction = if reversed {
        Direction::Reversed
    } else {
        Direction::Forward
    };
    let opts = IntegratorOptions {
        record: true,
        ..IntegratorOptions::default()
    };
    let traj = dynamics::integrate(State::new(u, v), &params.inner, tau, direction, &opts)
        .map_err(to_py)?;
    Ok(traj
        .samples
        .iter()
        .map(|s| (s.state.u, s.state.v))
        .collect())
}

#[pymodule]
fn allee_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<Equilibrium>()?;
    m.add_class::<Cycle>()?;
    m.add_class::<BasinMap>()?;
    m.add_function(wrap_pyfunction!(vector_field, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(all_equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(interior_equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(saddle_node_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_maximum, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_curve, m)?)?;
    m.add_function(wrap_pyfunction!(bt_points, m)?)?;
    m.add_function(wrap_pyfunction!(limit_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(connection_search, m)?)?;
    m.add_function(wrap_pyfunction!(basins, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    Ok(())
}
