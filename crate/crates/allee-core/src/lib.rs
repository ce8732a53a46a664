//! Equilibrium, stability, and bifurcation analysis for a Leslie-Gower
//! predator-prey model with a weak Allee effect on the prey.
//!
//! The model is studied in a nondimensional form on the trapping region
//! `{0 < u <= 1, 0 <= v <= 1}`:
//!
//! ```text
//! du/dtau = u^2 ((u + A)(1 - u)(u - M) - Q v)
//! dv/dtau = S (u + A)(u - v) v
//! ```
//!
//! with `A` in (0,1), `M < 0` (weak Allee), `Q > 0`, `S > 0`. Positive
//! equilibria sit on the diagonal `v = u` at roots of the cubic
//! `g(u) = u^3 - T u^2 - L u + A M`, where `T = 1 - A + M` and
//! `L = A(M + 1) - Q - M`.
//!
//! The crate is organised in layers:
//!
//! * [`model`] - parameter/state types, the vector field and its Jacobian,
//!   the dimensional counterpart, and the blow-up chart at the origin;
//! * [`equilibria`] - the equilibrium cubic, root classification, fold
//!   (saddle-node) thresholds, and the Hopf threshold function;
//! * [`bifurcation`] - Hopf curve, Bogdanov-Takens points, transversality
//!   and cusp diagnostics, and parameter-plane diagrams;
//! * [`dynamics`] - an adaptive Runge-Kutta integrator with event
//!   refinement, limit-cycle detection, separatrix tracing, basins of
//!   attraction, and global-connection (homoclinic/heteroclinic) searches.

pub mod bifurcation;
pub mod dynamics;
pub mod equilibria;
mod error;
pub mod model;

pub use error::{Error, Result};
pub use model::{DimensionalParams, DimensionalState, ModelParams, State};
