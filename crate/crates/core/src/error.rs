//! Error types shared across the crate.

use thiserror::Error;

/// Rejected construction of a phase-space state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("q has dimension {q_dim} but p has dimension {p_dim}")]
    DimensionMismatch { q_dim: usize, p_dim: usize },
    #[error("state dimension must be at least 1")]
    EmptyState,
    #[error("state contains a non-finite component")]
    NonFinite,
}

/// Failure to evaluate a model at a phase-space point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// The potential (or its gradient) is singular at `q`. For the Kepler
    /// model this fires when `|q|` falls inside the close-approach guard.
    #[error("potential singular at |q| = {radius:.6e} (guard radius {guard:.6e})")]
    Singularity { radius: f64, guard: f64 },
}

/// Failure of a one-step map. Trajectory drivers convert these into a
/// terminal run status instead of propagating them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    /// A sub-map hit a model singularity; `map` identifies the failing sub-map.
    #[error("{map}: {source}")]
    Model {
        map: &'static str,
        source: ModelError,
    },
    /// The exact action sub-flow escapes to -infinity inside the step.
    /// `blowup_time` is the relative time at which the sub-flow diverges.
    #[error("{map}: action sub-flow escapes to -infinity after {blowup_time:.6e} time units")]
    SubflowBlowup { map: &'static str, blowup_time: f64 },
    /// An update denominator fell below roundoff scale, or an implicit
    /// action update has no real solution.
    #[error("{map}: degenerate update denominator {denominator:.6e}")]
    DegenerateDenominator { map: &'static str, denominator: f64 },
    #[error("composition order must be an even integer >= 2, got {order}")]
    UnsupportedOrder { order: u32 },
}

impl StepError {
    /// The sub-map or update that failed, when known.
    pub fn map(&self) -> Option<&'static str> {
        match self {
            StepError::Model { map, .. }
            | StepError::SubflowBlowup { map, .. }
            | StepError::DegenerateDenominator { map, .. } => Some(map),
            StepError::UnsupportedOrder { .. } => None,
        }
    }
}

/// The closed-form damped-oscillator solution only covers the underdamped
/// regime.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("analytic solution requires damping < 2*omega0 (got damping {damping}, omega0 {omega0})")]
pub struct UnsupportedRegime {
    pub damping: f64,
    pub omega0: f64,
}
