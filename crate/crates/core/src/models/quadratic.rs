//! Harmonic oscillator with quadratic dependence on the action.

use crate::error::{ModelError, StepError};
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// One-dimensional oscillator `V(q) = q²/2 − C` with quadratic action term
/// `f(s) = γ s²/2`.
///
/// The zero level set of `H` is the ellipsoid `q²/2 + p²/2 + γ s²/2 = C`
/// (a sphere of radius `√(2C)` when `γ = 1`); it carries a stable
/// equilibrium at the north pole `(0, 0, +√(2C/γ))` and an unstable one at
/// the south pole `(0, 0, −√(2C/γ))`, with an unstable invariant half-line
/// hanging below the south pole. Trajectories near that half-line make the
/// problem stiff for explicit non-geometric integrators.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticActionOscillator {
    /// Coefficient γ > 0 of the quadratic action term.
    pub gamma: f64,
    /// Potential offset C > 0: `V(q) = q²/2 − C`.
    pub offset: f64,
}

impl QuadraticActionOscillator {
    pub fn new(gamma: f64, offset: f64) -> Self {
        assert!(gamma > 0.0, "gamma must be positive");
        assert!(offset > 0.0, "potential offset must be positive");
        QuadraticActionOscillator { gamma, offset }
    }

    /// Action coordinate `√(2C/γ)` of the two equilibria (±).
    pub fn pole_action(&self) -> f64 {
        (2.0 * self.offset / self.gamma).sqrt()
    }

    /// The stable equilibrium `(0, 0, +√(2C/γ))`.
    pub fn north_pole(&self) -> ContactState {
        ContactState::scalar(0.0, 0.0, self.pole_action(), 0.0)
    }

    /// The unstable equilibrium `(0, 0, −√(2C/γ))`.
    pub fn south_pole(&self) -> ContactState {
        ContactState::scalar(0.0, 0.0, -self.pole_action(), 0.0)
    }
}

impl SeparableContactModel for QuadraticActionOscillator {
    fn dim(&self) -> usize {
        1
    }

    fn potential(&self, q: &[f64], _t: f64) -> Result<f64, ModelError> {
        Ok(0.5 * q[0] * q[0] - self.offset)
    }

    fn grad_potential(&self, q: &[f64], _t: f64) -> Result<Vec<f64>, ModelError> {
        Ok(vec![q[0]])
    }

    fn action_term(&self, s: f64, _t: f64) -> f64 {
        0.5 * self.gamma * s * s
    }

    fn action_term_ds(&self, s: f64, _t: f64) -> f64 {
        self.gamma * s
    }

    fn action_term_dt(&self, _s: f64, _t: f64) -> f64 {
        0.0
    }

    fn potential_dt(&self, _q: &[f64], _t: f64) -> Result<f64, ModelError> {
        Ok(0.0)
    }

    fn a_map(&self, state: &ContactState, tau: f64) -> Result<ContactState, StepError> {
        quadratic_a_map(state, tau, self.gamma)
    }

    fn name(&self) -> &'static str {
        "quadratic_oscillator"
    }
}

/// Exact action sub-flow for `f(s) = γ s²/2`: with `d = 1 + γ τ s / 2`,
///
/// ```text
/// s' = s / d,    p' = p / d²,    q' = q.
/// ```
///
/// `s'` solves `ṡ = −γ s²/2` and the momentum factor follows from the ratio
/// `p' = p · f(s')/f(s) = p (s'/s)²`. The sub-flow escapes to −∞ in finite
/// time when `d` reaches zero, i.e. after `2/(γ|s|)` time units for `s` and
/// `τ` of opposite effect; that boundary is reported as a blow-up error.
pub fn quadratic_a_map(
    state: &ContactState,
    tau: f64,
    gamma: f64,
) -> Result<ContactState, StepError> {
    let d = 1.0 + 0.5 * gamma * tau * state.s;
    if d <= 0.0 {
        return Err(StepError::SubflowBlowup {
            map: "A (quadratic action)",
            blowup_time: 2.0 / (gamma * state.s.abs()),
        });
    }
    Ok(ContactState {
        q: state.q.clone(),
        p: state.p.iter().map(|pi| pi / (d * d)).collect(),
        s: state.s / d,
        t: state.t,
    })
}
