//! Separable contact Hamiltonians `H = |p|²/2 + V(q,t) + f(s,t)`.
//!
//! Each model supplies the potential `V`, the action term `f`, their
//! derivatives, and the exact flow of the action piece — the closed-form
//! `A` sub-map every splitting integrator builds on.

mod kepler;
mod linear;
mod quadratic;

pub use kepler::{kepler_a_map, PerturbedKepler};
pub use linear::{damped_oscillator_exact, LinearDampedOscillator};
pub use quadratic::{quadratic_a_map, QuadraticActionOscillator};

use crate::error::{ModelError, StepError};
use crate::state::ContactState;

/// A separable contact Hamiltonian `H(q, p, s, t) = |p|²/2 + V(q,t) + f(s,t)`.
///
/// The kinetic piece is fixed by the framework; implementations provide the
/// potential and action pieces with analytic derivatives. `a_map` must be the
/// exact time-`tau` flow of the frozen-time sub-system
/// `q̇ = 0, ṗ = −p ∂f/∂s, ṡ = −f`, and must reduce to the identity at
/// `tau = 0`.
pub trait SeparableContactModel {
    /// Configuration-space dimension `n`.
    fn dim(&self) -> usize;

    /// Potential `V(q, t)`.
    fn potential(&self, q: &[f64], t: f64) -> Result<f64, ModelError>;

    /// Gradient `∇V(q, t)`.
    fn grad_potential(&self, q: &[f64], t: f64) -> Result<Vec<f64>, ModelError>;

    /// Action term `f(s, t)`.
    fn action_term(&self, s: f64, t: f64) -> f64;

    /// Partial derivative `∂f/∂s(s, t)`.
    fn action_term_ds(&self, s: f64, t: f64) -> f64;

    /// Exact flow of the action sub-Hamiltonian over time `tau`, with `t`
    /// frozen at the state's current time.
    fn a_map(&self, state: &ContactState, tau: f64) -> Result<ContactState, StepError>;

    /// `∂V/∂t(q, t)`. Central finite difference unless overridden; only the
    /// Hamiltonian-drift diagnostic uses it.
    fn potential_dt(&self, q: &[f64], t: f64) -> Result<f64, ModelError> {
        let h = crate::FD_STEP_DEFAULT;
        Ok((self.potential(q, t + h)? - self.potential(q, t - h)?) / (2.0 * h))
    }

    /// `∂f/∂t(s, t)`. Central finite difference unless overridden.
    fn action_term_dt(&self, s: f64, t: f64) -> f64 {
        let h = crate::FD_STEP_DEFAULT;
        (self.action_term(s, t + h) - self.action_term(s, t - h)) / (2.0 * h)
    }

    /// Accounting hook, called once per full vector-field evaluation.
    /// The counting wrapper in [`crate::diagnostics`] overrides this.
    fn note_vector_field_eval(&self) {}

    /// Identifier used in reports and output metadata.
    fn name(&self) -> &'static str;
}

impl<M: SeparableContactModel + ?Sized> SeparableContactModel for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn potential(&self, q: &[f64], t: f64) -> Result<f64, ModelError> {
        (**self).potential(q, t)
    }
    fn grad_potential(&self, q: &[f64], t: f64) -> Result<Vec<f64>, ModelError> {
        (**self).grad_potential(q, t)
    }
    fn action_term(&self, s: f64, t: f64) -> f64 {
        (**self).action_term(s, t)
    }
    fn action_term_ds(&self, s: f64, t: f64) -> f64 {
        (**self).action_term_ds(s, t)
    }
    fn a_map(&self, state: &ContactState, tau: f64) -> Result<ContactState, StepError> {
        (**self).a_map(state, tau)
    }
    fn potential_dt(&self, q: &[f64], t: f64) -> Result<f64, ModelError> {
        (**self).potential_dt(q, t)
    }
    fn action_term_dt(&self, s: f64, t: f64) -> f64 {
        (**self).action_term_dt(s, t)
    }
    fn note_vector_field_eval(&self) {
        (**self).note_vector_field_eval()
    }
    fn name(&self) -> &'static str {
        (**self).name()
    }
}
