//! Numerical dynamics: orbit integration, limit cycles, separatrices,
//! basins of attraction, and global connections.

mod basins;
mod connection;
mod cycles;
mod integrator;
mod manifolds;

pub use basins::{basins, AttractorRef, BasinCell, BasinGrid, StateWindow};
pub use connection::{
    connection_search, connection_separation, ConnectionKind, ConnectionResult,
};
pub use cycles::{find_limit_cycles, CycleStability, LimitCycle};
pub use integrator::{
    integrate, Direction, IntegratorOptions, Termination, Trajectory, TrajectorySample,
};
pub use manifolds::{trace_manifolds, BranchEnd, Compass, ManifoldBranch, ManifoldKind};
