//! Implementations of the six subcommands.

use allee_core::equilibria::{Equilibrium, EquilibriumKind};

use crate::svg::Plot;

pub mod basins;
pub mod bifurcation;
pub mod connection;
pub mod equilibria;
pub mod portrait;
pub mod verify;

/// Draws the documented marker for an equilibrium kind.
pub fn portrait_glyph(plot: &mut Plot, eq: &Equilibrium) {
    let (u, v) = (eq.state.u, eq.state.v);
    match eq.kind {
        EquilibriumKind::Attractor => plot.disk_filled(u, v, 6.0, "black"),
        EquilibriumKind::Repeller => plot.disk_open(u, v, 6.0),
        EquilibriumKind::Saddle => plot.cross(u, v, 7.0),
        EquilibriumKind::StableSaddleNode => plot.half_disk(u, v, 6.0, true),
        EquilibriumKind::UnstableSaddleNode => plot.half_disk(u, v, 6.0, false),
        EquilibriumKind::NonHyperbolicSaddle => plot.circled_cross(u, v, 6.0),
        EquilibriumKind::Cusp => plot.diamond(u, v, 6.0),
        EquilibriumKind::Marginal => plot.disk_dotted(u, v, 6.0),
    }
}
