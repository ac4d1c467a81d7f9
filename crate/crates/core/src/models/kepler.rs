//! Planar Kepler problem with a time-periodic velocity forcing.

use crate::error::{ModelError, StepError};
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// Kepler potential `V(q) = −μ/|q|` with dissipative forcing
/// `f(s, t) = α sin(Ωt) s`, on the plane (`n = 2`).
///
/// The induced Newton equation is `q̈ + μ q/|q|³ + α sin(Ωt) q̇ = 0`: an
/// attracting center with a periodically alternating drag, so energy is
/// pumped and removed with zero mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedKepler {
    /// Gravitational parameter μ > 0 of the potential. Kept separate from
    /// the forcing amplitude; conflating the two degenerates the orbit.
    pub mu: f64,
    /// Forcing amplitude α.
    pub alpha: f64,
    /// Forcing angular frequency Ω.
    pub omega: f64,
    /// Close-approach guard: the potential is treated as singular for
    /// `|q| <= eps_radius`, so a collapsing trajectory raises a definite
    /// error instead of returning enormous finite forces.
    pub eps_radius: f64,
}

impl PerturbedKepler {
    pub const DEFAULT_EPS_RADIUS: f64 = 1e-10;

    pub fn new(mu: f64, alpha: f64, omega: f64) -> Self {
        Self::with_guard(mu, alpha, omega, Self::DEFAULT_EPS_RADIUS)
    }

    pub fn with_guard(mu: f64, alpha: f64, omega: f64, eps_radius: f64) -> Self {
        assert!(mu > 0.0, "gravitational parameter must be positive");
        assert!(eps_radius > 0.0, "collision guard must be positive");
        PerturbedKepler {
            mu,
            alpha,
            omega,
            eps_radius,
        }
    }

    /// The circular orbit of the unperturbed problem at radius 1:
    /// `q = (1, 0), p = (0, √μ), s = 0, t = 0`.
    pub fn circular_start(&self) -> ContactState {
        ContactState::planar([1.0, 0.0], [0.0, self.mu.sqrt()], 0.0, 0.0)
    }

    fn guarded_radius(&self, q: &[f64]) -> Result<f64, ModelError> {
        let r = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r <= self.eps_radius || !r.is_finite() {
            return Err(ModelError::Singularity {
                radius: r,
                guard: self.eps_radius,
            });
        }
        Ok(r)
    }

    /// Forcing coefficient `c(t) = α sin(Ωt)`, the value of `∂f/∂s`.
    pub fn forcing(&self, t: f64) -> f64 {
        self.alpha * (self.omega * t).sin()
    }
}

impl SeparableContactModel for PerturbedKepler {
    fn dim(&self) -> usize {
        2
    }

    fn potential(&self, q: &[f64], _t: f64) -> Result<f64, ModelError> {
        Ok(-self.mu / self.guarded_radius(q)?)
    }

    fn grad_potential(&self, q: &[f64], _t: f64) -> Result<Vec<f64>, ModelError> {
        let r = self.guarded_radius(q)?;
        let scale = self.mu / (r * r * r);
        Ok(q.iter().map(|x| scale * x).collect())
    }

    fn action_term(&self, s: f64, t: f64) -> f64 {
        self.forcing(t) * s
    }

    fn action_term_ds(&self, _s: f64, t: f64) -> f64 {
        self.forcing(t)
    }

    fn action_term_dt(&self, s: f64, t: f64) -> f64 {
        self.alpha * self.omega * (self.omega * t).cos() * s
    }

    fn potential_dt(&self, _q: &[f64], _t: f64) -> Result<f64, ModelError> {
        Ok(0.0)
    }

    fn a_map(&self, state: &ContactState, tau: f64) -> Result<ContactState, StepError> {
        Ok(kepler_a_map(state, tau, self.alpha, self.omega))
    }

    fn name(&self) -> &'static str {
        "kepler"
    }
}

/// Exact action sub-flow for `f(s, t) = α sin(Ωt) s` with `t` frozen:
/// with `c = α sin(Ωt)`, both `s` and `p` contract by `exp(−c·τ)`.
///
/// This is the closed-form solution of `ṡ = −c·s, ṗ = −c·p`, and is the
/// continuous extension of the momentum ratio `p' = p·f(s')/f(s)` through
/// the removable singularity at `s = 0`.
pub fn kepler_a_map(state: &ContactState, tau: f64, alpha: f64, omega: f64) -> ContactState {
    let c = alpha * (omega * state.t).sin();
    let factor = (-c * tau).exp();
    ContactState {
        q: state.q.clone(),
        p: state.p.iter().map(|pi| pi * factor).collect(),
        s: state.s * factor,
        t: state.t,
    }
}
