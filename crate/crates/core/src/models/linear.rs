//! Constant-coefficient damped harmonic oscillator, with its closed-form
//! solution for convergence studies.

use crate::error::{ModelError, StepError, UnsupportedRegime};
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// One-dimensional oscillator `V(q) = ω₀² q²/2` with linear action term
/// `f(s) = damping · s`, inducing `q̈ + damping·q̇ + ω₀² q = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearDampedOscillator {
    /// Stiffness ω₀ > 0.
    pub omega0: f64,
    /// Constant damping coefficient ≥ 0.
    pub damping: f64,
}

impl LinearDampedOscillator {
    pub fn new(omega0: f64, damping: f64) -> Self {
        assert!(omega0 > 0.0, "omega0 must be positive");
        assert!(damping >= 0.0, "damping must be non-negative");
        LinearDampedOscillator { omega0, damping }
    }
}

impl SeparableContactModel for LinearDampedOscillator {
    fn dim(&self) -> usize {
        1
    }

    fn potential(&self, q: &[f64], _t: f64) -> Result<f64, ModelError> {
        Ok(0.5 * self.omega0 * self.omega0 * q[0] * q[0])
    }

    fn grad_potential(&self, q: &[f64], _t: f64) -> Result<Vec<f64>, ModelError> {
        Ok(vec![self.omega0 * self.omega0 * q[0]])
    }

    fn action_term(&self, s: f64, _t: f64) -> f64 {
        self.damping * s
    }

    fn action_term_ds(&self, _s: f64, _t: f64) -> f64 {
        self.damping
    }

    fn action_term_dt(&self, _s: f64, _t: f64) -> f64 {
        0.0
    }

    fn potential_dt(&self, _q: &[f64], _t: f64) -> Result<f64, ModelError> {
        Ok(0.0)
    }

    fn a_map(&self, state: &ContactState, tau: f64) -> Result<ContactState, StepError> {
        // f linear in s: both s and p contract by exp(-damping * tau)
        let factor = (-self.damping * tau).exp();
        Ok(ContactState {
            q: state.q.clone(),
            p: state.p.iter().map(|pi| pi * factor).collect(),
            s: state.s * factor,
            t: state.t,
        })
    }

    fn name(&self) -> &'static str {
        "linear_oscillator"
    }
}

/// Exact solution of `q̈ + damping·q̇ + ω₀² q = 0` with `q(0) = q0`,
/// `q̇(0) = p0`, in the underdamped regime `damping < 2 ω₀`. Returns
/// `(q(t), q̇(t))`.
pub fn damped_oscillator_exact(
    q0: f64,
    p0: f64,
    omega0: f64,
    damping: f64,
    t: f64,
) -> Result<(f64, f64), UnsupportedRegime> {
    if damping >= 2.0 * omega0 {
        return Err(UnsupportedRegime { damping, omega0 });
    }
    let delta = 0.5 * damping;
    let omega_d = (omega0 * omega0 - delta * delta).sqrt();
    let envelope = (-delta * t).exp();
    let (sin_t, cos_t) = (omega_d * t).sin_cos();
    let a = q0;
    let b = (p0 + delta * q0) / omega_d;
    let q = envelope * (a * cos_t + b * sin_t);
    let qdot = -delta * q + envelope * omega_d * (b * cos_t - a * sin_t);
    Ok((q, qdot))
}
