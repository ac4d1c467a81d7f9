//! One-step maps and the fixed-step trajectory driver.

mod classic;
mod splitting;
mod variational;

pub use classic::{midpoint_step, rk4_step};
pub use splitting::{
    chi2_step, chi_step, step_a, step_b, step_b_compat, step_c, step_d, triple_jump_coefficients,
};
pub use variational::{cvi2_step, cvi2_step_carried, discrete_momenta, CviCarry};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagnostics::{CounterSnapshot, CountingModel, EvalCounters};
use crate::error::StepError;
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// Families of one-step maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    /// Splitting contact integrator of even order.
    Chi,
    /// Explicit contact variational integrator (order 2).
    Cvi,
    /// Classical Runge-Kutta 4.
    Rk4,
    /// Explicit midpoint (order 2).
    Midpoint,
}

/// Identifier plus parameters of one integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepMethod {
    kind: MethodKind,
    order: u32,
    b_map_compat: bool,
}

/// Unknown or malformed method identifier.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown method `{input}` (expected chi2, chi4, chi6, ... (even), cvi2, rk4 or midpoint)")]
pub struct MethodParseError {
    pub input: String,
}

impl StepMethod {
    /// Splitting integrator of the given even order ≥ 2.
    pub fn chi(order: u32) -> Result<Self, MethodParseError> {
        if order < 2 || !order.is_multiple_of(2) {
            return Err(MethodParseError {
                input: format!("chi{order}"),
            });
        }
        Ok(StepMethod {
            kind: MethodKind::Chi,
            order,
            b_map_compat: false,
        })
    }

    pub fn chi2() -> Self {
        Self::chi(2).expect("order 2 is valid")
    }

    pub fn cvi2() -> Self {
        StepMethod {
            kind: MethodKind::Cvi,
            order: 2,
            b_map_compat: false,
        }
    }

    pub fn rk4() -> Self {
        StepMethod {
            kind: MethodKind::Rk4,
            order: 4,
            b_map_compat: false,
        }
    }

    pub fn midpoint() -> Self {
        StepMethod {
            kind: MethodKind::Midpoint,
            order: 2,
            b_map_compat: false,
        }
    }

    /// Select the halved potential-action update in the B sub-map
    /// (splitting methods only; ignored by the others).
    pub fn with_b_map_compat(mut self, on: bool) -> Self {
        self.b_map_compat = on;
        self
    }

    pub fn kind(&self) -> MethodKind {
        self.kind
    }

    /// Formal convergence order.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn b_map_compat(&self) -> bool {
        self.b_map_compat
    }

    /// Canonical identifier: `chi2`, `chi4`, ..., `cvi2`, `rk4`, `midpoint`.
    pub fn id(&self) -> String {
        match self.kind {
            MethodKind::Chi => format!("chi{}", self.order),
            MethodKind::Cvi => "cvi2".to_string(),
            MethodKind::Rk4 => "rk4".to_string(),
            MethodKind::Midpoint => "midpoint".to_string(),
        }
    }
}

impl fmt::Display for StepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for StepMethod {
    type Err = MethodParseError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let unknown = || MethodParseError {
            input: input.to_string(),
        };
        match input {
            "cvi2" => Ok(StepMethod::cvi2()),
            "rk4" => Ok(StepMethod::rk4()),
            "midpoint" => Ok(StepMethod::midpoint()),
            other => {
                let order = other
                    .strip_prefix("chi")
                    .and_then(|suffix| suffix.parse::<u32>().ok())
                    .ok_or_else(unknown)?;
                StepMethod::chi(order).map_err(|_| unknown())
            }
        }
    }
}

/// A one-step map with per-trajectory state (the variational integrator
/// reuses endpoint data between consecutive steps).
#[derive(Debug, Clone)]
pub struct Stepper {
    method: StepMethod,
    carry: Option<CviCarry>,
}

impl Stepper {
    pub fn new(method: StepMethod) -> Self {
        Stepper {
            method,
            carry: None,
        }
    }

    /// Advance one step. Consecutive calls must pass the state returned by
    /// the previous call; use [`Stepper::reset`] when starting elsewhere.
    pub fn step<M: SeparableContactModel + ?Sized>(
        &mut self,
        model: &M,
        state: &ContactState,
        tau: f64,
    ) -> Result<ContactState, StepError> {
        match self.method.kind {
            MethodKind::Chi => splitting::chi_step_mode(
                model,
                state,
                tau,
                self.method.order,
                self.method.b_map_compat,
            ),
            MethodKind::Cvi => {
                let (next, carry) =
                    variational::cvi2_step_carried(model, state, tau, self.carry.take())?;
                self.carry = Some(carry);
                Ok(next)
            }
            MethodKind::Rk4 => classic::rk4_step(model, state, tau),
            MethodKind::Midpoint => classic::midpoint_step(model, state, tau),
        }
    }

    /// Drop carried endpoint data.
    pub fn reset(&mut self) {
        self.carry = None;
    }

    pub fn method(&self) -> StepMethod {
        self.method
    }
}

/// Terminal status of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    /// A step produced a non-finite state; `t` is the time of the last
    /// good state.
    Diverged {
        t: f64,
    },
    ModelSingularity {
        t: f64,
    },
    SubflowBlowup {
        t: f64,
    },
    DegenerateDenominator {
        t: f64,
    },
}

impl RunStatus {
    fn from_step_error(error: &StepError, t: f64) -> Self {
        match error {
            StepError::Model { .. } => RunStatus::ModelSingularity { t },
            StepError::SubflowBlowup { .. } => RunStatus::SubflowBlowup { t },
            StepError::DegenerateDenominator { .. } => RunStatus::DegenerateDenominator { t },
            // an invalid order is a usage error, but surfaces as a failed
            // run rather than a panic
            StepError::UnsupportedOrder { .. } => RunStatus::Diverged { t },
        }
    }

    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }

    /// Time of the last good state for failed runs.
    pub fn failure_time(&self) -> Option<f64> {
        match *self {
            RunStatus::Completed => None,
            RunStatus::Diverged { t }
            | RunStatus::ModelSingularity { t }
            | RunStatus::SubflowBlowup { t }
            | RunStatus::DegenerateDenominator { t } => Some(t),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Completed => "Completed",
            RunStatus::Diverged { .. } => "Diverged",
            RunStatus::ModelSingularity { .. } => "ModelSingularity",
            RunStatus::SubflowBlowup { .. } => "SubflowBlowup",
            RunStatus::DegenerateDenominator { .. } => "DegenerateDenominator",
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failure_time() {
            None => write!(f, "{}", self.label()),
            Some(t) => write!(f, "{}(t={t})", self.label()),
        }
    }
}

/// Sampled states plus run metadata from one integration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Stored states: the initial state, every `sample_every`-th state, and
    /// the final (or last good) state.
    pub samples: Vec<ContactState>,
    pub method: StepMethod,
    pub tau: f64,
    pub status: RunStatus,
    pub counters: CounterSnapshot,
    /// Steps successfully taken.
    pub steps_taken: u64,
}

impl Trajectory {
    pub fn initial(&self) -> &ContactState {
        self.samples.first().expect("trajectory stores >= 1 sample")
    }

    pub fn last(&self) -> &ContactState {
        self.samples.last().expect("trajectory stores >= 1 sample")
    }
}

/// Integrate with fixed step `tau` from `state0.t` to `t_end`, storing every
/// `sample_every`-th state (the initial and final states are always stored).
///
/// The number of steps is `round((t_end − state0.t)/tau)`. Failures never
/// propagate as errors: a step error or a non-finite state terminates the
/// run with the corresponding status and the time of the last good state.
pub fn integrate<M: SeparableContactModel + ?Sized>(
    model: &M,
    method: StepMethod,
    state0: &ContactState,
    tau: f64,
    t_end: f64,
    sample_every: usize,
) -> Trajectory {
    assert!(tau > 0.0, "step size must be positive");
    assert!(t_end >= state0.t, "t_end must not precede the initial time");
    assert!(sample_every >= 1, "sample_every must be at least 1");
    assert_eq!(
        model.dim(),
        state0.dim(),
        "model and state dimensions differ"
    );

    let counters = EvalCounters::default();
    let counted = CountingModel::new(model, &counters);
    let mut stepper = Stepper::new(method);

    let n_steps = ((t_end - state0.t) / tau).round() as u64;
    let mut samples = Vec::with_capacity((n_steps as usize / sample_every).saturating_add(2));
    samples.push(state0.clone());
    let mut state = state0.clone();
    let mut status = RunStatus::Completed;
    let mut steps_taken = 0;

    for k in 1..=n_steps {
        match stepper.step(&counted, &state, tau) {
            Ok(next) if next.is_finite() => {
                state = next;
                steps_taken = k;
                if k % sample_every as u64 == 0 {
                    samples.push(state.clone());
                }
            }
            Ok(_) => {
                status = RunStatus::Diverged { t: state.t };
                break;
            }
            Err(error) => {
                status = RunStatus::from_step_error(&error, state.t);
                break;
            }
        }
    }

    // final (or last good) state, unless it is already the last sample
    if samples.last() != Some(&state) {
        samples.push(state);
    }

    Trajectory {
        samples,
        method,
        tau,
        status,
        counters: counters.snapshot(),
        steps_taken,
    }
}
