//! Adaptive Dormand-Prince 5(4) integration with PI step control, FSAL,
//! and bisection-refined event (section-crossing) location.
//!
//! The stepper works in rescaled time `tau` and integrates either the
//! forward or the sign-flipped field, so reversed-time orbits reuse the same
//! machinery. Both coordinate axes are exactly invariant in floating point:
//! every term of `du/dtau` carries `u^2` and every term of `dv/dtau`
//! carries `v`, so states starting on an axis stay on it bitwise.

use crate::error::{Error, Result};
use crate::model::{field_raw, ModelParams, State};

/// Time orientation of the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    /// Integrates the negated field; orbits are traversed backwards.
    Reversed,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reversed => -1.0,
        }
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    /// Reached the requested `tau` span.
    TimeLimit,
    /// Converged onto a known equilibrium (field norm below `1e-12` and
    /// distance below `1e-9`).
    Equilibrium(State),
    /// Settled onto a periodic orbit (assigned by higher-level callers that
    /// recognise the cycle; the raw stepper never emits it).
    Cycle,
    /// Left the computational domain (`u > 10`, `v > 10`, or a coordinate
    /// pushed below `-1e-12`).
    DomainExit,
    /// Exhausted the accepted-step budget.
    StepBudget,
    /// An observer requested the stop (section hit, proximity event, ...).
    Stopped,
}

/// One recorded point of a trajectory, with the field value for dense
/// (cubic Hermite) reconstruction between samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub tau: f64,
    pub state: State,
    pub deriv: (f64, f64),
}

/// Result of an integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last_state(&self) -> State {
        self.samples.last().expect("trajectory has samples").state
    }

    /// Total arc length of the recorded polyline.
    pub fn arc_length(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| w[0].state.dist(&w[1].state))
            .sum()
    }
}

/// Integration options. Defaults match the accuracy budget of the analysis
/// layer: relative `1e-8`, absolute `1e-10`.
#[derive(Debug, Clone)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Hard cap on accepted steps.
    pub max_steps: usize,
    /// Record every accepted step into the trajectory. When off, only the
    /// initial and final samples are kept (basin sweeps).
    pub record: bool,
    /// Equilibria used for convergence detection.
    pub known_equilibria: Vec<State>,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_steps: 50_000_000,
            record: true,
            known_equilibria: Vec::new(),
        }
    }
}

const DOMAIN_MAX: f64 = 10.0;
const DOMAIN_MIN: f64 = -1e-12;
const FIELD_NORM_TOL: f64 = 1e-12;
const EQUILIBRIUM_DIST_TOL: f64 = 1e-9;

/// One accepted step, exposed to observers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Step {
    pub tau0: f64,
    pub y0: State,
    pub f0: (f64, f64),
    pub tau1: f64,
    pub y1: State,
    pub f1: (f64, f64),
}

/// Observer verdict after each accepted step.
pub(crate) enum Control {
    Continue,
    /// Stop and overwrite the final sample with the given state/time (used
    /// after refining an event inside the step).
    StopAt { tau: f64, state: State },
    Stop,
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct Stepper<'a> {
    params: &'a ModelParams,
    sign: f64,
    rel: f64,
    abs: f64,
    pub tau: f64,
    pub y: State,
    pub f: (f64, f64),
    h: f64,
    err_prev: f64,
    had_rejection: bool,
    pub rejected: usize,
}

impl<'a> Stepper<'a> {
    pub fn new(start: State, params: &'a ModelParams, direction: Direction, opts: &IntegratorOptions) -> Self {
        let sign = direction.sign();
        let f = directed_field(start, params, sign);
        // Conservative initial step from the field scale.
        let scale = (f.0.hypot(f.1)).max(1e-8);
        let h = (0.01 * (1.0 + start.u.hypot(start.v)) / scale).clamp(1e-10, 1e-2);
        Self {
            params,
            sign,
            rel: opts.rel_tol,
            abs: opts.abs_tol,
            tau: 0.0,
            y: start,
            f,
            h,
            err_prev: 1e-4,
            had_rejection: false,
            rejected: 0,
        }
    }

    #[inline]
    fn eval(&self, y: State) -> (f64, f64) {
        directed_field(y, self.params, self.sign)
    }

    /// A single raw Dormand-Prince step of size `h` from `(y0, f0)`; no
    /// error control. Returns the end state and its field value.
    pub fn raw_step(&self, y0: State, f0: (f64, f64), h: f64) -> (State, (f64, f64), [f64; 2]) {
        let k1 = f0;
        let y2 = advance2(y0, h, &[(A21, k1)]);
        let k2 = self.eval(y2);
        let y3 = advance2(y0, h, &[(A31, k1), (A32, k2)]);
        let k3 = self.eval(y3);
        let y4 = advance2(y0, h, &[(A41, k1), (A42, k2), (A43, k3)]);
        let k4 = self.eval(y4);
        let y5 = advance2(y0, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]);
        let k5 = self.eval(y5);
        let y6 = advance2(
            y0,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        );
        let k6 = self.eval(y6);
        let y1 = advance2(
            y0,
            h,
            &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)],
        );
        let k7 = self.eval(y1);
        let err = [
            h * (E1 * k1.0 + E3 * k3.0 + E4 * k4.0 + E5 * k5.0 + E6 * k6.0 + E7 * k7.0),
            h * (E1 * k1.1 + E3 * k3.1 + E4 * k4.1 + E5 * k5.1 + E6 * k6.1 + E7 * k7.1),
        ];
        (y1, k7, err)
    }

    /// Advances one accepted step, adapting `h`; `limit` caps the step so a
    /// final step can land exactly on the time horizon.
    pub fn advance(&mut self, limit: f64) -> Result<Step> {
        loop {
            let h = self.h.min(limit).max(1e-300);
            let (y1, f1, err) = self.raw_step(self.y, self.f, h);
            let finite = y1.is_finite() && f1.0.is_finite() && f1.1.is_finite();
            let err_norm = if finite {
                let sc_u = self.abs + self.rel * self.y.u.abs().max(y1.u.abs());
                let sc_v = self.abs + self.rel * self.y.v.abs().max(y1.v.abs());
                let eu = err[0] / sc_u;
                let ev = err[1] / sc_v;
                (0.5 * (eu * eu + ev * ev)).sqrt()
            } else {
                f64::INFINITY
            };

            if err_norm <= 1.0 {
                let step = Step {
                    tau0: self.tau,
                    y0: self.y,
                    f0: self.f,
                    tau1: self.tau + h,
                    y1,
                    f1,
                };
                self.tau += h;
                self.y = y1;
                self.f = f1;
                // PI controller (accepted): grow mildly, damped by history.
                let err_clamped = err_norm.max(1e-10);
                let fac = 0.9 * err_clamped.powf(-0.17) * self.err_prev.powf(0.04);
                let fac_max = if self.had_rejection { 1.0 } else { 10.0 };
                self.h = (self.h * fac.clamp(0.2, fac_max)).min(1.0);
                self.err_prev = err_clamped;
                self.had_rejection = false;
                return Ok(step);
            }

            // Rejected: shrink from the step actually attempted and retry.
            self.rejected += 1;
            self.had_rejection = true;
            let fac = if err_norm.is_finite() {
                (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            self.h = h * fac;
            if self.h < 1e-13 * self.tau.abs().max(1.0) {
                return Err(Error::Stiffness {
                    tau: self.tau,
                    partial: Box::new(Trajectory {
                        samples: vec![TrajectorySample {
                            tau: self.tau,
                            state: self.y,
                            deriv: self.f,
                        }],
                        termination: Termination::StepBudget,
                        accepted_steps: 0,
                        rejected_steps: self.rejected,
                    }),
                });
            }
        }
    }
}

#[inline]
fn directed_field(y: State, params: &ModelParams, sign: f64) -> (f64, f64) {
    let (du, dv) = field_raw(y, params);
    (sign * du, sign * dv)
}

#[inline]
fn advance2(y0: State, h: f64, terms: &[(f64, (f64, f64))]) -> State {
    let mut du = 0.0;
    let mut dv = 0.0;
    for (a, k) in terms {
        du += a * k.0;
        dv += a * k.1;
    }
    State::new(y0.u + h * du, y0.v + h * dv)
}

fn out_of_domain(y: State) -> bool {
    y.u > DOMAIN_MAX || y.v > DOMAIN_MAX || y.u < DOMAIN_MIN || y.v < DOMAIN_MIN
}

fn near_equilibrium(y: State, f: (f64, f64), known: &[State]) -> Option<State> {
    if f.0.hypot(f.1) >= FIELD_NORM_TOL {
        return None;
    }
    known
        .iter()
        .find(|eq| eq.dist(&y) < EQUILIBRIUM_DIST_TOL)
        .copied()
}

/// Core driver shared by the public entry point and the internal observers.
pub(crate) fn run(
    start: State,
    params: &ModelParams,
    tau_span: f64,
    direction: Direction,
    opts: &IntegratorOptions,
    mut observe: impl FnMut(&Stepper, &Step) -> Control,
) -> Result<Trajectory> {
    if !start.is_finite() {
        return Err(Error::NonFinite(format!("state ({}, {})", start.u, start.v)));
    }
    if !(tau_span.is_finite() && tau_span > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "integration span must be positive and finite, got {tau_span}"
        )));
    }

    let mut stepper = Stepper::new(start, params, direction, opts);
    let mut samples = vec![TrajectorySample { tau: 0.0, state: start, deriv: stepper.f }];
    let mut accepted = 0usize;

    // Starting at (or on top of) an equilibrium: zero-length orbit.
    if let Some(eq) = near_equilibrium(start, stepper.f, &opts.known_equilibria) {
        return Ok(Trajectory {
            samples,
            termination: Termination::Equilibrium(eq),
            accepted_steps: 0,
            rejected_steps: 0,
        });
    }
    if out_of_domain(start) {
        return Ok(Trajectory {
            samples,
            termination: Termination::DomainExit,
            accepted_steps: 0,
            rejected_steps: 0,
        });
    }

    let mut termination = Termination::StepBudget;
    while accepted < opts.max_steps {
        let remaining = tau_span - stepper.tau;
        if remaining <= 1e-14 * tau_span {
            termination = Termination::TimeLimit;
            break;
        }
        let step = match stepper.advance(remaining) {
            Ok(s) => s,
            Err(Error::Stiffness { tau, partial: _ }) => {
                return Err(Error::Stiffness {
                    tau,
                    partial: Box::new(Trajectory {
                        samples,
                        termination: Termination::StepBudget,
                        accepted_steps: accepted,
                        rejected_steps: stepper.rejected,
                    }),
                });
            }
            Err(e) => return Err(e),
        };
        accepted += 1;
        if opts.record {
            samples.push(TrajectorySample { tau: step.tau1, state: step.y1, deriv: step.f1 });
        }

        match observe(&stepper, &step) {
            Control::Continue => {}
            Control::Stop => {
                if !opts.record {
                    samples.push(TrajectorySample { tau: step.tau1, state: step.y1, deriv: step.f1 });
                }
                termination = Termination::Stopped;
                break;
            }
            Control::StopAt { tau, state } => {
                let deriv = directed_field(state, params, direction.sign());
                if opts.record {
                    samples.pop();
                }
                samples.push(TrajectorySample { tau, state, deriv });
                termination = Termination::Stopped;
                break;
            }
        }

        if out_of_domain(step.y1) {
            if !opts.record {
                samples.push(TrajectorySample { tau: step.tau1, state: step.y1, deriv: step.f1 });
            }
            termination = Termination::DomainExit;
            break;
        }
        if let Some(eq) = near_equilibrium(step.y1, step.f1, &opts.known_equilibria) {
            if !opts.record {
                samples.push(TrajectorySample { tau: step.tau1, state: step.y1, deriv: step.f1 });
            }
            termination = Termination::Equilibrium(eq);
            break;
        }
    }

    if matches!(termination, Termination::TimeLimit | Termination::StepBudget) && !opts.record {
        let deriv = stepper.f;
        samples.push(TrajectorySample { tau: stepper.tau, state: stepper.y, deriv });
    }

    Ok(Trajectory {
        samples,
        termination,
        accepted_steps: accepted,
        rejected_steps: stepper.rejected,
    })
}

/// Integrates the nondimensional system from `start` over a `tau` span.
pub fn integrate(
    start: State,
    params: &ModelParams,
    tau_span: f64,
    direction: Direction,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    run(start, params, tau_span, direction, opts, |_, _| Control::Continue)
}

/// Refines an event `g(state) = 0` known to change sign across `step`.
/// Bisects on the sub-step size, re-integrating a raw step from the step's
/// start each probe, until the crossing time is bracketed to `1e-12` in
/// `tau`. Returns `(tau, state, field)` at the crossing.
pub(crate) fn refine_crossing(
    stepper: &Stepper,
    step: &Step,
    event: impl Fn(&State) -> f64,
) -> (f64, State, (f64, f64)) {
    let g0 = event(&step.y0);
    let h_full = step.tau1 - step.tau0;
    let mut lo = 0.0f64;
    let mut hi = h_full;
    let mut best = (step.y1, step.f1);
    // g(lo) carries the sign of g0; halve until the bracket collapses.
    let positive_at_lo = g0 > 0.0;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let (y, f, _) = stepper.raw_step(step.y0, step.f0, mid);
        let g = event(&y);
        if (g > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
            best = (y, f);
        }
    }
    (step.tau0 + hi, best.0, best.1)
}
