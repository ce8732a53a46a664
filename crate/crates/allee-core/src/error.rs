//! Crate-wide error type.

use thiserror::Error;

use crate::dynamics::Trajectory;

/// Errors produced by validation, analysis preconditions, and the numerical
/// dynamics layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation (range or finiteness).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A state or scalar input was NaN or infinite.
    #[error("non-finite input: {0}")]
    NonFinite(String),

    /// The dimensional predator equation is singular on the `N = 0` axis.
    #[error("dimensional state requires N > 0 (got N = {0})")]
    SingularState(f64),

    /// An operation's precondition does not hold at the given parameters.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The step controller collapsed the step below the resolvable floor.
    #[error("integrator step underflow at tau = {tau:.6e}; system too stiff at this tolerance")]
    Stiffness {
        tau: f64,
        /// Portion of the orbit completed before the failure.
        partial: Box<Trajectory>,
    },

    /// A separatrix branch terminated without ever reaching the comparison
    /// section, so the separation functional is undefined there.
    #[error("separatrix branch {branch} did not reach the section at u = {section_u}")]
    SectionMiss { branch: String, section_u: f64 },

    /// A section crossing was too close to tangential for the separation
    /// measurement to be trustworthy.
    #[error("near-tangential section crossing on branch {branch} (|du/dtau| = {speed:.3e})")]
    TangentialCrossing { branch: String, speed: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
