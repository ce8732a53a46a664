//! Global-connection searches: heteroclinic (corner saddle to interior
//! saddle) and homoclinic (interior saddle to itself) orbits, located by
//! bisection on `S` of a signed separation functional.
//!
//! The functional compares, on the vertical section `u = (u2 + u3)/2`, the
//! first *orientation-matched* crossing of the relevant unstable branch
//! against that of the stable branch of the interior saddle `P2`. A
//! crossing is orientation-matched when the forward flow passes it
//! right-to-left (`du/dtau < 0`); this makes the homoclinic functional
//! well defined, because the outbound leg of `W^u(P2)` crosses the section
//! left-to-right and must not be compared against the returning leg of
//! `W^s(P2)`. If the unstable branch instead falls onto an attractor on the
//! far (right) side of the section without crossing, the separation is
//! assigned a positive sign: the branch stayed above/right of the stable
//! separatrix for this `S`.

use crate::equilibria;
use crate::error::{Error, Result};
use crate::model::{ModelParams, State};

use super::integrator::{refine_crossing, run, Control, Direction, IntegratorOptions, Termination};
use super::manifolds::saddle_eigenpairs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    /// `W^u(1, 0)` meeting `W^s(P2)`.
    Heteroclinic,
    /// `W^u(P2)` returning to `W^s(P2)` around the upper equilibrium.
    Homoclinic,
}

impl std::fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConnectionKind::Heteroclinic => write!(f, "heteroclinic"),
            ConnectionKind::Homoclinic => write!(f, "homoclinic"),
        }
    }
}

/// Outcome of a successful bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionResult {
    pub kind: ConnectionKind,
    /// Critical predator growth rate at which the connection occurs.
    pub s_critical: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
    /// Section position used by the separation functional.
    pub section_u: f64,
    /// Every `(S, separation)` pair evaluated, in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
}

const TAU_CAP: f64 = 1e5;
const ARC_CAP: f64 = 80.0;
const TANGENT_TOL: f64 = 1e-10;
/// Sign token for the attractor-fallback rule.
const FAR_SIDE_SEPARATION: f64 = 1.0;
const BRACKET_TOL: f64 = 1e-8;

/// Where a branch met the section (or why it did not).
enum SectionHit {
    Crossed { v: f64 },
    /// Converged to an attractor right of the section without crossing.
    FarSideAttractor,
}

/// Traces one branch until its first orientation-matched crossing of
/// `u = u_sec`. `branch_name` feeds error diagnostics.
fn branch_section_value(
    params: &ModelParams,
    seed: State,
    time_direction: Direction,
    u_sec: f64,
    known: &[State],
    branch_name: &str,
) -> Result<SectionHit> {
    // Orientation matching: the forward flow must cross right-to-left. In
    // forward integration order that is u decreasing; in reversed order it
    // is u increasing.
    let qualifies = |g0: f64, g1: f64| match time_direction {
        Direction::Forward => g0 > 0.0 && g1 <= 0.0,
        Direction::Reversed => g0 < 0.0 && g1 >= 0.0,
    };
    let opts = IntegratorOptions {
        record: false,
        known_equilibria: known.to_vec(),
        ..Default::default()
    };
    let mut arc = 0.0f64;
    let mut hit: Option<(State, (f64, f64))> = None;
    let traj = run(seed, params, TAU_CAP, time_direction, &opts, |stepper, step| {
        arc += step.y0.dist(&step.y1);
        let g0 = step.y0.u - u_sec;
        let g1 = step.y1.u - u_sec;
        if qualifies(g0, g1) {
            let (tau, state, field) = refine_crossing(stepper, step, |s| s.u - u_sec);
            hit = Some((state, field));
            return Control::StopAt { tau, state };
        }
        if arc > ARC_CAP {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;

    if let Some((state, field)) = hit {
        // `field` carries the integration sign; the forward-flow speed
        // through the section is its magnitude either way.
        let speed = field.0.abs();
        if speed < TANGENT_TOL {
            return Err(Error::TangentialCrossing {
                branch: branch_name.to_string(),
                speed,
            });
        }
        return Ok(SectionHit::Crossed { v: state.v });
    }

    if let (Direction::Forward, Termination::Equilibrium(eq)) = (time_direction, &traj.termination)
    {
        if eq.u > u_sec {
            return Ok(SectionHit::FarSideAttractor);
        }
    }
    Err(Error::SectionMiss {
        branch: branch_name.to_string(),
        section_u: u_sec,
    })
}

struct Setup {
    section_u: f64,
    known: Vec<State>,
    p2: State,
}

fn setup(a: f64, m: f64, q: f64, s_probe: f64) -> Result<Setup> {
    let params = ModelParams::new(a, m, q, s_probe)?;
    let eqs = equilibria::positive_equilibria(&params);
    if eqs.len() != 3 || eqs.iter().any(|e| e.multiplicity != 1) {
        return Err(Error::Precondition(format!(
            "connection search needs three distinct positive equilibria; found {} at \
             (A, M, Q) = ({a}, {m}, {q})",
            eqs.len()
        )));
    }
    let section_u = 0.5 * (eqs[1].state.u + eqs[2].state.u);
    let mut known: Vec<State> = eqs.iter().map(|e| e.state).collect();
    known.push(State::new(0.0, 0.0));
    known.push(State::new(1.0, 0.0));
    Ok(Setup {
        section_u,
        known,
        p2: eqs[1].state,
    })
}

/// Signed separation at one `S`: `v(W^s crossing) - v(W^u crossing)`.
fn separation(a: f64, m: f64, q: f64, s: f64, setup: &Setup, kind: ConnectionKind) -> Result<f64> {
    let params = ModelParams::new(a, m, q, s)?;
    let offset = 1e-6;

    // Stable branch of P2, reaching the section from the north-east side.
    let jac_p2 = crate::model::jacobian(setup.p2, &params)?;
    let ((_, w_stable), (_, v_unstable)) = saddle_eigenpairs(jac_p2);
    let w = if w_stable.0 > 0.0 {
        w_stable
    } else {
        (-w_stable.0, -w_stable.1)
    };
    let seed_s = State::new(setup.p2.u + offset * w.0, setup.p2.v + offset * w.1);
    // Exclude P2 itself from convergence detection near the seed.
    let known_s: Vec<State> = setup
        .known
        .iter()
        .copied()
        .filter(|e| e.dist(&setup.p2) > 1e-7)
        .collect();
    let v_s = match branch_section_value(
        &params,
        seed_s,
        Direction::Reversed,
        setup.section_u,
        &known_s,
        "W^s(P2) NE",
    )? {
        SectionHit::Crossed { v } => v,
        SectionHit::FarSideAttractor => unreachable!("reversed branches never take the fallback"),
    };

    // Unstable branch: from the corner saddle (heteroclinic) or from P2
    // around the upper equilibrium (homoclinic).
    let (seed_u, name_u, known_u) = match kind {
        ConnectionKind::Heteroclinic => {
            let corner = State::new(1.0, 0.0);
            let jac = crate::model::jacobian(corner, &params)?;
            let ((_, _), (_, vu)) = saddle_eigenpairs(jac);
            // Interior branch: u-component negative.
            let dir = if vu.0 <= 0.0 { vu } else { (-vu.0, -vu.1) };
            (
                State::new(corner.u + offset * dir.0, corner.v + offset * dir.1),
                "W^u(1,0) NW",
                setup
                    .known
                    .iter()
                    .copied()
                    .filter(|e| e.dist(&corner) > 1e-7)
                    .collect::<Vec<_>>(),
            )
        }
        ConnectionKind::Homoclinic => {
            let dir = if v_unstable.0 >= 0.0 {
                v_unstable
            } else {
                (-v_unstable.0, -v_unstable.1)
            };
            (
                State::new(setup.p2.u + offset * dir.0, setup.p2.v + offset * dir.1),
                "W^u(P2) NE",
                known_s.clone(),
            )
        }
    };
    let v_u = match branch_section_value(
        &params,
        seed_u,
        Direction::Forward,
        setup.section_u,
        &known_u,
        name_u,
    )? {
        SectionHit::Crossed { v } => v,
        SectionHit::FarSideAttractor => return Ok(FAR_SIDE_SEPARATION),
    };

    Ok(v_s - v_u)
}

/// Bisects the separation functional over an `S` bracket. Returns
/// `Ok(None)` when the separation does not change sign over the bracket;
/// errors propagate geometry failures (missing equilibria, tangential or
/// missed sections).
pub fn connection_search(
    a: f64,
    m: f64,
    q: f64,
    bracket: (f64, f64),
    kind: ConnectionKind,
) -> Result<Option<ConnectionResult>> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let setup = setup(a, m, q, lo)?;
    let mut evaluations = Vec::new();
    let mut sep_lo = separation(a, m, q, lo, &setup, kind)?;
    evaluations.push((lo, sep_lo));
    let sep_hi = separation(a, m, q, hi, &setup, kind)?;
    evaluations.push((hi, sep_hi));

    if sep_lo == 0.0 || sep_hi == 0.0 {
        // Landed exactly on the connection: treat the zero endpoint as
        // critical.
        let s_critical = if sep_lo == 0.0 { lo } else { hi };
        return Ok(Some(ConnectionResult {
            kind,
            s_critical,
            bracket: (lo, hi),
            section_u: setup.section_u,
            evaluations,
        }));
    }
    if (sep_lo > 0.0) == (sep_hi > 0.0) {
        return Ok(None);
    }

    for _ in 0..60 {
        if hi - lo < BRACKET_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let sep_mid = separation(a, m, q, mid, &setup, kind)?;
        evaluations.push((mid, sep_mid));
        if sep_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (sep_mid > 0.0) == (sep_lo > 0.0) {
            lo = mid;
            sep_lo = sep_mid;
        } else {
            hi = mid;
        }
    }

    Ok(Some(ConnectionResult {
        kind,
        s_critical: 0.5 * (lo + hi),
        bracket: (lo, hi),
        section_u: setup.section_u,
        evaluations,
    }))
}

/// Signed separation at a single `S`, without bisecting: the `v` gap between
/// the stable and unstable slices on the mid-saddle section (positive when
/// the stable slice crosses above), or the far-side sentinel `1.0` when the
/// unstable branch converges beyond the section instead of crossing it.
pub fn connection_separation(
    a: f64,
    m: f64,
    q: f64,
    s: f64,
    kind: ConnectionKind,
) -> Result<f64> {
    let setup = setup(a, m, q, s)?;
    separation(a, m, q, s, &setup, kind)
}
