//! Quantitative diagnostics: evaluation accounting, convergence orders,
//! orbital elements, invariant-surface adherence, fixed-point analysis,
//! stability scans, variational residuals and wall-clock benchmarks.

mod bench;
mod convergence;
mod orbital;
mod oscillator;
mod residual;
mod stability;

pub use bench::{benchmark, BenchmarkRow};
pub use convergence::{convergence_order, ConvergenceStudy, Reference};
pub use orbital::{kepler_elements, precession_rate, OrbitalElements};
pub use oscillator::{
    numerical_fixed_point, oscillator_fixed_points, sphere_distance, FixedPointAnalysis,
    FixedPointOptions, OscillatorFixedPoints,
};
pub use residual::gel_residual;
pub use stability::{stability_scan, StabilityReport};

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::error::{ModelError, StepError};
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// Failure of a diagnostic procedure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("fixed-point iteration did not converge in {max_iters} iterations (residual {residual:.3e})")]
    NoConvergence { max_iters: usize, residual: f64 },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error(
        "samples not uniformly spaced: expected {expected:.6e}, found {found:.6e} at index {index}"
    )]
    NonUniformSampling {
        expected: f64,
        found: f64,
        index: usize,
    },
    #[error("convergence reference unavailable: {reason}")]
    ReferenceUnavailable { reason: String },
    #[error("invalid diagnostic input: {reason}")]
    InvalidInput { reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Step(#[from] StepError),
}

/// Per-run evaluation counters. Monotone within a run; one instance per
/// run, never shared across runs.
#[derive(Debug, Default)]
pub struct EvalCounters {
    pub potential: AtomicU64,
    pub grad_potential: AtomicU64,
    pub action_term: AtomicU64,
    pub action_term_ds: AtomicU64,
    pub vector_field: AtomicU64,
    pub a_map: AtomicU64,
}

impl EvalCounters {
    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            potential_evals: self.potential.load(Ordering::Relaxed),
            grad_potential_evals: self.grad_potential.load(Ordering::Relaxed),
            action_evals: self.action_term.load(Ordering::Relaxed),
            action_ds_evals: self.action_term_ds.load(Ordering::Relaxed),
            vector_field_evals: self.vector_field.load(Ordering::Relaxed),
            a_map_evals: self.a_map.load(Ordering::Relaxed),
        }
    }
}

/// Frozen counter values attached to a finished run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CounterSnapshot {
    pub potential_evals: u64,
    pub grad_potential_evals: u64,
    pub action_evals: u64,
    pub action_ds_evals: u64,
    pub vector_field_evals: u64,
    pub a_map_evals: u64,
}

impl CounterSnapshot {
    /// `(name, value)` pairs in output order.
    pub fn entries(&self) -> [(&'static str, u64); 6] {
        [
            ("potential_evals", self.potential_evals),
            ("grad_potential_evals", self.grad_potential_evals),
            ("action_evals", self.action_evals),
            ("action_ds_evals", self.action_ds_evals),
            ("vector_field_evals", self.vector_field_evals),
            ("a_map_evals", self.a_map_evals),
        ]
    }
}

/// Transparent wrapper that counts model evaluations. Time-derivative
/// fallbacks are deliberately not counted: they belong to diagnostics, not
/// to the integration cost being measured.
pub struct CountingModel<'a, M: ?Sized> {
    inner: &'a M,
    counters: &'a EvalCounters,
}

impl<'a, M: SeparableContactModel + ?Sized> CountingModel<'a, M> {
    pub fn new(inner: &'a M, counters: &'a EvalCounters) -> Self {
        CountingModel { inner, counters }
    }

    fn bump(counter: &AtomicU64) {
        counter.fetch_add(1, Ordering::Relaxed);
    }
}

impl<M: SeparableContactModel + ?Sized> SeparableContactModel for CountingModel<'_, M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn potential(&self, q: &[f64], t: f64) -> Result<f64, ModelError> {
        Self::bump(&self.counters.potential);
        self.inner.potential(q, t)
    }

    fn grad_potential(&self, q: &[f64], t: f64) -> Result<Vec<f64>, ModelError> {
        Self::bump(&self.counters.grad_potential);
        self.inner.grad_potential(q, t)
    }

    fn action_term(&self, s: f64, t: f64) -> f64 {
        Self::bump(&self.counters.action_term);
        self.inner.action_term(s, t)
    }

    fn action_term_ds(&self, s: f64, t: f64) -> f64 {
        Self::bump(&self.counters.action_term_ds);
        self.inner.action_term_ds(s, t)
    }

    fn a_map(&self, state: &ContactState, tau: f64) -> Result<ContactState, StepError> {
        Self::bump(&self.counters.a_map);
        self.inner.a_map(state, tau)
    }

    fn potential_dt(&self, q: &[f64], t: f64) -> Result<f64, ModelError> {
        self.inner.potential_dt(q, t)
    }

    fn action_term_dt(&self, s: f64, t: f64) -> f64 {
        self.inner.action_term_dt(s, t)
    }

    fn note_vector_field_eval(&self) {
        Self::bump(&self.counters.vector_field);
    }

    fn name(&self) -> &'static str {
        self.inner.name()
    }
}
