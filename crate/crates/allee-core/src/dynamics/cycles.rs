//! Limit-cycle detection by return-map iteration on a horizontal
//! Poincare section through a focal equilibrium.
//!
//! The section is the half-line `{v = v_eq, u > u_eq}`; qualifying
//! crossings are the geometric `v`-increasing ones (which happen exactly at
//! `u > u_eq` for this field). Stable cycles are fixed points of the forward
//! return map; unstable cycles are found as fixed points of the
//! reversed-time map. Convergence is plain Cauchy iteration - extrapolation
//! is deliberately avoided because near weak foci the contraction is not
//! geometric and extrapolated "limits" are spurious.

use rayon::prelude::*;

use crate::equilibria;
use crate::error::{Error, Result};
use crate::model::{ModelParams, State};

use super::integrator::{
    refine_crossing, run, Control, Direction, IntegratorOptions, Termination,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleStability {
    Stable,
    Unstable,
}

/// A validated periodic orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCycle {
    /// Fixed point of the return map: the cycle crosses `v = section_v`
    /// upward at `u = section_u`.
    pub section_u: f64,
    pub section_v: f64,
    pub period: f64,
    pub stability: CycleStability,
    /// Forward-map multiplier `dR/du` at the fixed point (`|.| < 1` for
    /// stable cycles).
    pub return_slope: f64,
    /// Distance between the lap's start and end after refinement.
    pub residual: f64,
    /// One full lap of the orbit (thinned for storage).
    pub polyline: Vec<State>,
    /// Positive equilibria enclosed by the cycle.
    pub enclosed: Vec<State>,
}

/// Per-lap integration budget in rescaled time.
const LAP_TAU_BUDGET: f64 = 1e5;
/// Iteration cap for the return map.
const MAX_LAPS: usize = 600;
/// First-stage Cauchy tolerance on the section coordinate.
const CAUCHY_TOL: f64 = 1e-9;
/// Second-stage polish target.
const POLISH_TOL: f64 = 5e-12;
/// Fixed points closer than this to the focal equilibrium are collapse
/// artefacts, not cycles.
const MIN_RADIUS: f64 = 1e-3;
/// Candidates closer than this merge into one cycle.
const DEDUP_TOL: f64 = 1e-6;
/// Maximum accepted closure residual for a validated cycle.
const RESIDUAL_TOL: f64 = 1e-7;

struct SectionMap<'a> {
    params: &'a ModelParams,
    u_eq: f64,
    v_sec: f64,
    direction: Direction,
    opts: IntegratorOptions,
}

impl<'a> SectionMap<'a> {
    fn qualifies(&self, g0: f64, g1: f64) -> bool {
        match self.direction {
            Direction::Forward => g0 < 0.0 && g1 >= 0.0,
            Direction::Reversed => g0 > 0.0 && g1 <= 0.0,
        }
    }

    /// Next qualifying section crossing from `(u_from, v_sec)`; `None` when
    /// the orbit leaves, collapses onto an equilibrium, or exhausts the lap
    /// budget first.
    fn next(&self, u_from: f64) -> Option<(f64, f64)> {
        let v_sec = self.v_sec;
        let traj = run(
            State::new(u_from, v_sec),
            self.params,
            LAP_TAU_BUDGET,
            self.direction,
            &self.opts,
            |stepper, step| {
                let g0 = step.y0.v - v_sec;
                let g1 = step.y1.v - v_sec;
                if self.qualifies(g0, g1) {
                    let (tau, state, _) = refine_crossing(stepper, step, |s| s.v - v_sec);
                    if state.u > self.u_eq {
                        return Control::StopAt { tau, state };
                    }
                }
                Control::Continue
            },
        )
        .ok()?;
        match traj.termination {
            Termination::Stopped => {
                let last = traj.samples.last().expect("non-empty trajectory");
                Some((last.state.u, last.tau))
            }
            _ => None,
        }
    }

    /// Iterates the map to a fixed point. Two stages: Cauchy convergence to
    /// `1e-9`, then extra laps to polish toward `5e-12` so the forward-lap
    /// closure stays under the residual budget even for unstable cycles.
    fn fixed_point(&self, seed: f64) -> Option<f64> {
        let mut u = seed;
        let mut converged = false;
        let mut polish_left = 50usize;
        for _ in 0..MAX_LAPS {
            let (next, _) = self.next(u)?;
            let delta = (next - u).abs();
            u = next;
            if delta < POLISH_TOL {
                return Some(u);
            }
            if delta < CAUCHY_TOL {
                converged = true;
            }
            if converged {
                polish_left -= 1;
                if polish_left == 0 {
                    return Some(u);
                }
            }
        }
        converged.then_some(u)
    }
}

fn winding_encloses(polyline: &[State], point: State) -> bool {
    let mut total = 0.0f64;
    let mut prev: Option<f64> = None;
    for p in polyline {
        let angle = (p.v - point.v).atan2(p.u - point.u);
        if let Some(a0) = prev {
            let mut d = angle - a0;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            total += d;
        }
        prev = Some(angle);
    }
    total.abs() > std::f64::consts::PI
}

fn thin(polyline: Vec<State>, cap: usize) -> Vec<State> {
    if polyline.len() <= cap {
        return polyline;
    }
    let stride = polyline.len().div_ceil(cap);
    let mut out: Vec<State> = polyline.iter().step_by(stride).copied().collect();
    if let Some(&last) = polyline.last() {
        if out.last() != Some(&last) {
            out.push(last);
        }
    }
    out
}

/// Hunts for limit cycles around a focal equilibrium by seeding the return
/// map along a fan of radii in both time directions. Returns validated
/// cycles sorted by section coordinate; an empty vector means no cycle was
/// found within the budgets (which is a legitimate outcome, not an error).
pub fn find_limit_cycles(params: &ModelParams, focus: State) -> Result<Vec<LimitCycle>> {
    if !focus.is_finite() {
        return Err(Error::NonFinite(format!("focus ({}, {})", focus.u, focus.v)));
    }
    if focus.v <= 0.0 {
        return Err(Error::Precondition(
            "cycle search needs an interior focal point (v > 0)".into(),
        ));
    }

    let mut known: Vec<State> = equilibria::positive_equilibria(params)
        .iter()
        .map(|e| e.state)
        .collect();
    known.push(State::new(0.0, 0.0));
    known.push(State::new(1.0, 0.0));

    let opts = IntegratorOptions {
        record: false,
        known_equilibria: known,
        ..Default::default()
    };

    const RADII: [f64; 12] = [
        0.004, 0.008, 0.015, 0.03, 0.06, 0.1, 0.15, 0.22, 0.3, 0.4, 0.55, 0.75,
    ];
    let jobs: Vec<(Direction, f64)> = [Direction::Forward, Direction::Reversed]
        .into_iter()
        .flat_map(|d| RADII.iter().map(move |&r| (d, r)))
        .filter(|(_, r)| focus.u + r < 1.5)
        .collect();

    let mut candidates: Vec<(f64, Direction)> = jobs
        .par_iter()
        .filter_map(|&(direction, r)| {
            let map = SectionMap {
                params,
                u_eq: focus.u,
                v_sec: focus.v,
                direction,
                opts: opts.clone(),
            };
            let u_star = map.fixed_point(focus.u + r)?;
            ((u_star - focus.u).abs() >= MIN_RADIUS).then_some((u_star, direction))
        })
        .collect();

    candidates.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    candidates.dedup_by(|a, b| (a.0 - b.0).abs() < DEDUP_TOL);

    let mut cycles = Vec::new();
    for (u_star, direction) in candidates {
        let map = SectionMap {
            params,
            u_eq: focus.u,
            v_sec: focus.v,
            direction,
            opts: opts.clone(),
        };
        // Secant polish on the displacement d(u) = R(u) - u.
        let mut u_star = u_star;
        for _ in 0..2 {
            let delta = 1e-6;
            let (Some((r0, _)), Some((r1, _))) = (map.next(u_star), map.next(u_star + delta))
            else {
                break;
            };
            let d0 = r0 - u_star;
            let d1 = r1 - (u_star + delta);
            if (d1 - d0).abs() < 1e-300 {
                break;
            }
            let shift = d0 * delta / (d1 - d0);
            if !shift.is_finite() || shift.abs() > 1e-4 {
                break;
            }
            u_star -= shift;
        }

        // Forward validation lap: period, polyline, closure residual.
        let record_opts = IntegratorOptions {
            record: true,
            known_equilibria: opts.known_equilibria.clone(),
            ..Default::default()
        };
        let lap_map = SectionMap {
            params,
            u_eq: focus.u,
            v_sec: focus.v,
            direction: Direction::Forward,
            opts: record_opts,
        };
        let start = State::new(u_star, focus.v);
        let traj = run(
            start,
            params,
            LAP_TAU_BUDGET,
            Direction::Forward,
            &lap_map.opts,
            |stepper, step| {
                let g0 = step.y0.v - focus.v;
                let g1 = step.y1.v - focus.v;
                if g0 < 0.0 && g1 >= 0.0 {
                    let (tau, state, _) = refine_crossing(stepper, step, |s| s.v - focus.v);
                    if state.u > focus.u {
                        return Control::StopAt { tau, state };
                    }
                }
                Control::Continue
            },
        )?;
        if !matches!(traj.termination, Termination::Stopped) {
            continue;
        }
        let period = traj.samples.last().unwrap().tau;
        let end = traj.last_state();
        let residual = end.dist(&start);
        if residual > RESIDUAL_TOL {
            continue;
        }

        // Return-map slope in the direction the cycle was found, mapped to
        // the forward multiplier.
        let delta = 1e-5;
        let slope_dir = match (map.next(u_star + delta), map.next(u_star - delta)) {
            (Some((up, _)), Some((dn, _))) => (up - dn) / (2.0 * delta),
            _ => f64::NAN,
        };
        let return_slope = match direction {
            Direction::Forward => slope_dir,
            Direction::Reversed => 1.0 / slope_dir,
        };
        let stability = match direction {
            Direction::Forward => CycleStability::Stable,
            Direction::Reversed => CycleStability::Unstable,
        };

        let polyline: Vec<State> = traj.samples.iter().map(|s| s.state).collect();
        let enclosed = equilibria::positive_equilibria(params)
            .iter()
            .map(|e| e.state)
            .filter(|&e| winding_encloses(&polyline, e))
            .collect();

        cycles.push(LimitCycle {
            section_u: u_star,
            section_v: focus.v,
            period,
            stability,
            return_slope,
            residual,
            polyline: thin(polyline, 4000),
            enclosed,
        });
    }

    cycles.sort_by(|x, y| x.section_u.partial_cmp(&y.section_u).unwrap());
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_boundary_foci() {
        let p = ModelParams::new(0.1, -0.1, 0.363, 0.3).unwrap();
        assert!(find_limit_cycles(&p, State::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn no_cycle_around_a_strong_attractor() {
        // Deep in the bistable regime the outer equilibria attract with
        // healthy margins; the fan finds nothing.
        let p = ModelParams::new(0.1, -0.1, 0.363, 0.3).unwrap();
        let eqs = crate::equilibria::positive_equilibria(&p);
        let cycles = find_limit_cycles(&p, eqs[2].state).unwrap();
        assert!(cycles.is_empty(), "unexpected cycles: {cycles:?}");
    }

    #[test]
    fn winding_number_distinguishes_inside_from_outside() {
        let circle: Vec<State> = (0..=64)
            .map(|i| {
                let t = i as f64 / 64.0 * std::f64::consts::TAU;
                State::new(0.5 + 0.2 * t.cos(), 0.5 + 0.2 * t.sin())
            })
            .collect();
        assert!(winding_encloses(&circle, State::new(0.5, 0.5)));
        assert!(winding_encloses(&circle, State::new(0.62, 0.55)));
        assert!(!winding_encloses(&circle, State::new(0.8, 0.5)));
        assert!(!winding_encloses(&circle, State::new(0.1, 0.9)));
    }
}
