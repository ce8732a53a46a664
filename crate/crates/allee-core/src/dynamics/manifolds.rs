//! Separatrix (invariant-manifold) tracing from hyperbolic saddles.
//!
//! Each saddle carries four branches: two unstable (integrated forward from
//! small offsets along the unstable eigenvector) and two stable (integrated
//! in reversed time along the stable eigenvector). Branches are tagged by
//! the compass quadrant of their seed offset and terminate on equilibrium
//! convergence, cycle capture, domain exit, or an arc-length cap.

use crate::equilibria::{self, Equilibrium};
use crate::error::{Error, Result};
use crate::model::{ModelParams, State};

use super::integrator::{run, Control, Direction, IntegratorOptions, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    Stable,
    Unstable,
}

/// Quadrant of the seed offset relative to the saddle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compass {
    NE,
    NW,
    SW,
    SE,
}

impl Compass {
    fn of(du: f64, dv: f64) -> Self {
        match (du >= 0.0, dv >= 0.0) {
            (true, true) => Compass::NE,
            (false, true) => Compass::NW,
            (false, false) => Compass::SW,
            (true, false) => Compass::SE,
        }
    }
}

impl std::fmt::Display for Compass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Compass::NE => "NE",
            Compass::NW => "NW",
            Compass::SW => "SW",
            Compass::SE => "SE",
        };
        write!(f, "{s}")
    }
}

/// How a branch terminated.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchEnd {
    /// Converged onto an equilibrium.
    Equilibrium(State),
    /// Settled onto a periodic orbit (detected by tail revisit).
    Cycle,
    /// Left the computational domain.
    DomainExit,
    /// Still wandering when the arc-length cap was reached.
    ArcCap,
}

/// One traced branch of a saddle's invariant manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldBranch {
    pub saddle: State,
    pub kind: ManifoldKind,
    pub direction: Compass,
    /// Eigenvalue the branch is tangent to.
    pub eigenvalue: f64,
    pub polyline: Vec<State>,
    pub end: BranchEnd,
}

/// Seed offset along the eigenvector.
const SEED_OFFSET: f64 = 1e-6;
/// Arc-length cap per branch.
const ARC_CAP: f64 = 50.0;
/// Time budget per branch.
const TAU_CAP: f64 = 1e6;

/// Real eigenpairs of a 2x2 matrix with negative determinant:
/// `((lambda_minus, v_minus), (lambda_plus, v_plus))`, unit eigenvectors
/// with a canonical sign.
pub(crate) fn saddle_eigenpairs(jac: [[f64; 2]; 2]) -> ((f64, (f64, f64)), (f64, (f64, f64))) {
    let trace = jac[0][0] + jac[1][1];
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
    let lambda_minus = 0.5 * (trace - disc);
    let lambda_plus = 0.5 * (trace + disc);
    let vector = |lambda: f64| {
        // Null vector of (J - lambda I): two candidate rows; take the better
        // conditioned one.
        let c1 = (jac[0][1], lambda - jac[0][0]);
        let c2 = (lambda - jac[1][1], jac[1][0]);
        let (mut x, mut y) = if c1.0.hypot(c1.1) >= c2.0.hypot(c2.1) {
            c1
        } else {
            c2
        };
        let n = x.hypot(y);
        x /= n;
        y /= n;
        // Canonical sign: first nonzero component positive.
        if x < 0.0 || (x == 0.0 && y < 0.0) {
            x = -x;
            y = -y;
        }
        (x, y)
    };
    (
        (lambda_minus, vector(lambda_minus)),
        (lambda_plus, vector(lambda_plus)),
    )
}

fn trace_branch(
    saddle: State,
    dir: (f64, f64),
    eigenvalue: f64,
    kind: ManifoldKind,
    params: &ModelParams,
    known: &[State],
) -> Result<ManifoldBranch> {
    let start = State::new(saddle.u + SEED_OFFSET * dir.0, saddle.v + SEED_OFFSET * dir.1);
    let time_direction = match kind {
        ManifoldKind::Unstable => Direction::Forward,
        ManifoldKind::Stable => Direction::Reversed,
    };
    let opts = IntegratorOptions {
        known_equilibria: known.to_vec(),
        ..Default::default()
    };
    let mut arc = 0.0f64;
    let traj = run(start, params, TAU_CAP, time_direction, &opts, |_, step| {
        arc += step.y0.dist(&step.y1);
        if arc > ARC_CAP {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;

    let end = match traj.termination {
        Termination::Equilibrium(eq) => BranchEnd::Equilibrium(eq),
        Termination::DomainExit => BranchEnd::DomainExit,
        _ => {
            // Arc cap or time limit: decide between a cycle and plain
            // wandering by looking for a close revisit of the endpoint well
            // before the end.
            let samples = &traj.samples;
            let last = samples.last().expect("non-empty trajectory");
            let revisit = samples
                .iter()
                .filter(|s| s.tau < last.tau - 2.0)
                .map(|s| s.state.dist(&last.state))
                .fold(f64::INFINITY, f64::min);
            if revisit < 1e-3 {
                BranchEnd::Cycle
            } else {
                BranchEnd::ArcCap
            }
        }
    };

    let polyline = traj.samples.iter().map(|s| s.state).collect();
    Ok(ManifoldBranch {
        saddle,
        kind,
        direction: Compass::of(dir.0, dir.1),
        eigenvalue,
        polyline,
        end,
    })
}

/// Traces all four separatrix branches of a hyperbolic saddle. Branch order
/// is fixed: unstable along `+v`, unstable along `-v`, stable along `+w`,
/// stable along `-w`, where `v`/`w` are the canonically signed unstable and
/// stable eigenvectors.
pub fn trace_manifolds(saddle: &Equilibrium, params: &ModelParams) -> Result<[ManifoldBranch; 4]> {
    if saddle.det >= 0.0 {
        return Err(Error::Precondition(format!(
            "manifold tracing needs a hyperbolic saddle (det < 0), got det = {} at ({}, {})",
            saddle.det, saddle.state.u, saddle.state.v
        )));
    }
    let jac = crate::model::jacobian(saddle.state, params)?;
    let ((lm, vm), (lp, vp)) = saddle_eigenpairs(jac);

    let mut known: Vec<State> = equilibria::positive_equilibria(params)
        .iter()
        .map(|e| e.state)
        .collect();
    known.push(State::new(0.0, 0.0));
    known.push(State::new(1.0, 0.0));
    // The saddle itself must not capture its own branches at the seed.
    known.retain(|s| s.dist(&saddle.state) > 1e-7);

    let branches = [
        trace_branch(saddle.state, vp, lp, ManifoldKind::Unstable, params, &known)?,
        trace_branch(
            saddle.state,
            (-vp.0, -vp.1),
            lp,
            ManifoldKind::Unstable,
            params,
            &known,
        )?,
        trace_branch(saddle.state, vm, lm, ManifoldKind::Stable, params, &known)?,
        trace_branch(
            saddle.state,
            (-vm.0, -vm.1),
            lm,
            ManifoldKind::Stable,
            params,
            &known,
        )?,
    ];
    Ok(branches)
}
