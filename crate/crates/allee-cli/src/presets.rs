//! Figure presets: named parameter points pinning every input of a run so
//! outputs are reproducible byte-for-byte on one platform.
//!
//! Each preset records the nondimensional parameters, and where relevant a
//! parameter-plane window, a grid resolution, or a connection bracket. The
//! canonical subcommand is what the regression suite runs for the preset;
//! any preset can still be passed to other subcommands that accept its
//! parameters.

use allee_core::dynamics::ConnectionKind;
use allee_core::equilibria::{saddle_node_thresholds, FoldSide};

use crate::error::{CliError, CliResult};

/// How the preset pins `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresetQ {
    Literal(f64),
    /// Exactly on the lower fold threshold for the preset's `(A, M)`.
    LowerFold,
    /// Exactly on the upper fold threshold.
    UpperFold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub id: &'static str,
    pub a: f64,
    pub m: f64,
    pub q: PresetQ,
    pub s: f64,
    /// `(Q, S)` window for bifurcation-diagram presets.
    pub window: Option<[f64; 4]>,
    pub resolution: Option<usize>,
    /// `S` bracket for connection presets.
    pub bracket: Option<(f64, f64)>,
    pub connection: Option<ConnectionKind>,
    /// Subcommand the regression suite runs this preset through.
    pub canonical: &'static str,
}

const P: Preset = Preset {
    id: "",
    a: 0.1,
    m: -0.1,
    q: PresetQ::Literal(0.363),
    s: 0.25,
    window: None,
    resolution: None,
    bracket: None,
    connection: None,
    canonical: "portrait",
};

pub const PRESETS: &[Preset] = &[
    // Root-structure reference slice: three positive equilibria between the
    // two fold thresholds; the equilibria report carries the cubic data.
    Preset {
        id: "F02",
        canonical: "equilibria",
        ..P
    },
    // Single interior equilibrium, large shelter: attractor ...
    Preset {
        id: "F04a",
        a: 0.5,
        m: -0.05,
        q: PresetQ::Literal(0.51),
        s: 0.1,
        ..P
    },
    // ... and the same point turned repeller with a stable cycle.
    Preset {
        id: "F04b",
        a: 0.5,
        m: -0.05,
        q: PresetQ::Literal(0.51),
        s: 0.045,
        ..P
    },
    // Three equilibria, decreasing S: bistable, mixed, both unstable.
    Preset {
        id: "F05a",
        s: 0.3,
        ..P
    },
    Preset {
        id: "F05b",
        s: 0.2,
        ..P
    },
    Preset {
        id: "F05c",
        s: 0.13,
        ..P
    },
    // Exactly on the fold thresholds: collapsed saddle-node pairs.
    Preset {
        id: "F06a",
        q: PresetQ::LowerFold,
        ..P
    },
    Preset {
        id: "F06b",
        q: PresetQ::UpperFold,
        ..P
    },
    // Two-parameter bifurcation diagram window.
    Preset {
        id: "F08",
        window: Some([0.30, 0.42, 0.0, 0.45]),
        resolution: Some(60),
        canonical: "bifurcation",
        ..P
    },
    // Fixed Q = 0.363, sweeping S downward through the global events.
    Preset {
        id: "F09a",
        s: 0.3,
        ..P
    },
    Preset {
        id: "F09b",
        s: 0.24962827,
        bracket: Some((0.235, 0.3)),
        connection: Some(ConnectionKind::Heteroclinic),
        ..P
    },
    Preset {
        id: "F09c",
        s: 0.235,
        bracket: Some((0.225, 0.235)),
        connection: Some(ConnectionKind::Homoclinic),
        ..P
    },
    Preset {
        id: "F09d",
        s: 0.225,
        bracket: Some((0.225, 0.235)),
        connection: Some(ConnectionKind::Homoclinic),
        ..P
    },
    Preset {
        id: "F09e",
        s: 0.18,
        ..P
    },
    Preset {
        id: "F09f",
        s: 0.13,
        ..P
    },
    // Two nested cycles claimed around the single interior point.
    Preset {
        id: "F10a",
        q: PresetQ::Literal(0.345),
        s: 0.134332,
        ..P
    },
    // Large cycle surrounding all three interior points.
    Preset {
        id: "F10b",
        s: 0.1298,
        ..P
    },
];

pub fn lookup(id: &str) -> CliResult<&'static Preset> {
    PRESETS.iter().find(|p| p.id == id).ok_or_else(|| {
        let known: Vec<&str> = PRESETS.iter().map(|p| p.id).collect();
        CliError::Validation(format!(
            "unknown figure preset `{id}`; known presets: {}",
            known.join(", ")
        ))
    })
}

impl Preset {
    /// Resolves the preset's `Q`, computing fold thresholds when pinned to
    /// one of them.
    pub fn q_value(&self) -> CliResult<f64> {
        match self.q {
            PresetQ::Literal(q) => Ok(q),
            PresetQ::LowerFold | PresetQ::UpperFold => {
                let want = if self.q == PresetQ::LowerFold {
                    FoldSide::Lower
                } else {
                    FoldSide::Upper
                };
                saddle_node_thresholds(self.a, self.m)
                    .into_iter()
                    .find(|t| t.side == want)
                    .map(|t| t.q)
                    .ok_or_else(|| {
                        CliError::Validation(format!(
                            "preset {} needs a fold threshold, but (A, M) = ({}, {}) has none",
                            self.id, self.a, self.m
                        ))
                    })
            }
        }
    }
}
