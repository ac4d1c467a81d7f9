//! Splitting integrators: exact sub-flows of the three Hamiltonian pieces
//! plus a time-advance map, composed palindromically.
//!
//! For `H = |p|²/2 [C] + V(q,t) [B] + f(s,t) [A]` each piece has an exact
//! frozen-time flow. The second-order composition places the kinetic map
//! outermost and the action map in the centre,
//!
//! ```text
//! S₂(τ) = C(τ/2) ∘ B(τ/2) ∘ D(τ/2) ∘ A(τ) ∘ D(τ/2) ∘ B(τ/2) ∘ C(τ/2)
//! ```
//!
//! (rightmost acts first), with the time map `D` split around the central
//! `A` so that the opening `C, B` evaluate at `t`, `A` at the midpoint
//! `t + τ/2`, and the closing `B, C` at `t + τ`. Even orders above 2 come
//! from the triple-jump recursion.

use crate::error::StepError;
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// Exact flow of the action piece `H_A = f(s, t)` (frozen `t`), delegated
/// to the model's closed form.
pub fn step_a<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
) -> Result<ContactState, StepError> {
    model.a_map(state, tau)
}

/// Exact flow of the potential piece `H_B = V(q, t)` (frozen `t`):
///
/// ```text
/// q' = q,    p' = p − τ ∇V(q, t),    s' = s − τ V(q, t).
/// ```
pub fn step_b<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
) -> Result<ContactState, StepError> {
    step_b_mode(model, state, tau, false)
}

/// Variant of [`step_b`] with the action update halved: `s' = s − τ V/2`.
///
/// This is not the exact sub-flow — it breaks both the exactness of the
/// composition's action component and its contact property — but it is kept
/// behind a switch so the two discretizations can be compared directly.
pub fn step_b_compat<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
) -> Result<ContactState, StepError> {
    step_b_mode(model, state, tau, true)
}

fn step_b_mode<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
    half_action: bool,
) -> Result<ContactState, StepError> {
    let wrap = |source| StepError::Model {
        map: "B (potential)",
        source,
    };
    let grad = model.grad_potential(&state.q, state.t).map_err(wrap)?;
    let potential = model.potential(&state.q, state.t).map_err(wrap)?;
    let action_scale = if half_action { 0.5 } else { 1.0 };
    Ok(ContactState {
        q: state.q.clone(),
        p: state
            .p
            .iter()
            .zip(grad.iter())
            .map(|(pi, gi)| pi - tau * gi)
            .collect(),
        s: state.s - action_scale * tau * potential,
        t: state.t,
    })
}

/// Exact flow of the kinetic piece `H_C = |p|²/2`:
///
/// ```text
/// q' = q + τ p,    p' = p,    s' = s + τ |p|²/2.
/// ```
pub fn step_c(state: &ContactState, tau: f64) -> ContactState {
    ContactState {
        q: state
            .q
            .iter()
            .zip(state.p.iter())
            .map(|(qi, pi)| qi + tau * pi)
            .collect(),
        p: state.p.clone(),
        s: state.s + 0.5 * tau * state.momentum_norm_squared(),
        t: state.t,
    }
}

/// Time-advance map `D`: `t' = t + τ`, everything else unchanged.
pub fn step_d(state: &ContactState, tau: f64) -> ContactState {
    ContactState {
        q: state.q.clone(),
        p: state.p.clone(),
        s: state.s,
        t: state.t + tau,
    }
}

/// One step of the second-order splitting integrator.
pub fn chi2_step<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
) -> Result<ContactState, StepError> {
    chi2_step_mode(model, state, tau, false)
}

fn chi2_step_mode<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
    b_map_compat: bool,
) -> Result<ContactState, StepError> {
    let half = 0.5 * tau;
    let x = step_c(state, half);
    let x = step_b_mode(model, &x, half, b_map_compat)?;
    let x = step_d(&x, half);
    let x = step_a(model, &x, tau)?;
    let x = step_d(&x, half);
    let x = step_b_mode(model, &x, half, b_map_compat)?;
    Ok(step_c(&x, half))
}

/// Triple-jump coefficients `(γ₁, γ₂)` turning a symmetric scheme of order
/// `target_order − 2` into one of order `target_order`:
/// `γ₁ = 1/(2 − 2^{1/(target_order − 1)})`, `γ₂ = 1 − 2γ₁`.
pub fn triple_jump_coefficients(target_order: u32) -> (f64, f64) {
    let exponent = 1.0 / (target_order as f64 - 1.0);
    let gamma1 = 1.0 / (2.0 - 2.0_f64.powf(exponent));
    (gamma1, 1.0 - 2.0 * gamma1)
}

/// One step of the splitting integrator of the given even order (≥ 2).
///
/// Order 2 is [`chi2_step`]; order `2k + 2` applies the order-`2k` scheme
/// three times with sub-steps `γ₁τ, γ₂τ, γ₁τ`.
pub fn chi_step<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
    order: u32,
) -> Result<ContactState, StepError> {
    chi_step_mode(model, state, tau, order, false)
}

pub(crate) fn chi_step_mode<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
    order: u32,
    b_map_compat: bool,
) -> Result<ContactState, StepError> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(StepError::UnsupportedOrder { order });
    }
    if order == 2 {
        return chi2_step_mode(model, state, tau, b_map_compat);
    }
    let (gamma1, gamma2) = triple_jump_coefficients(order);
    let x = chi_step_mode(model, state, gamma1 * tau, order - 2, b_map_compat)?;
    let x = chi_step_mode(model, &x, gamma2 * tau, order - 2, b_map_compat)?;
    chi_step_mode(model, &x, gamma1 * tau, order - 2, b_map_compat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{PerturbedKepler, QuadraticActionOscillator};
    use std::f64::consts::PI;

    struct FreeParticle;

    impl SeparableContactModel for FreeParticle {
        fn dim(&self) -> usize {
            1
        }
        fn potential(&self, _q: &[f64], _t: f64) -> Result<f64, crate::error::ModelError> {
            Ok(0.0)
        }
        fn grad_potential(
            &self,
            _q: &[f64],
            _t: f64,
        ) -> Result<Vec<f64>, crate::error::ModelError> {
            Ok(vec![0.0])
        }
        fn action_term(&self, _s: f64, _t: f64) -> f64 {
            0.0
        }
        fn action_term_ds(&self, _s: f64, _t: f64) -> f64 {
            0.0
        }
        fn a_map(&self, state: &ContactState, _tau: f64) -> Result<ContactState, StepError> {
            Ok(state.clone())
        }
        fn name(&self) -> &'static str {
            "free_particle"
        }
    }

    #[test]
    fn step_b_without_potential_is_identity() {
        let state = ContactState::scalar(0.3, -0.8, 1.5, 2.0);
        let out = step_b(&FreeParticle, &state, 0.7).unwrap();
        assert_eq!(out, state);
    }

    #[test]
    fn step_b_oscillator_action_update() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(0.0, 0.5, 0.0, 0.0);
        let out = step_b(&model, &state, 0.1).unwrap();
        // V(0) = -18, grad V(0) = 0
        assert_eq!(out.p, vec![0.5]);
        assert!((out.s - 1.8).abs() < 1e-15);
        let compat = step_b_compat(&model, &state, 0.1).unwrap();
        assert!((compat.s - 0.9).abs() < 1e-15);
    }

    #[test]
    fn step_b_kepler_kick() {
        let model = PerturbedKepler::new(1.0, 0.01, PI);
        let state = model.circular_start();
        let out = step_b(&model, &state, 0.1).unwrap();
        assert!((out.p[0] + 0.1).abs() < 1e-15);
        assert!((out.p[1] - 1.0).abs() < 1e-15);
        // V = -1 at radius 1, so s gains 0.1
        assert!((out.s - 0.1).abs() < 1e-15);
        assert_eq!(out.q, state.q);
    }

    #[test]
    fn step_c_drift_and_action_gain() {
        let state = ContactState::scalar(0.0, 2.0, 0.0, 0.0);
        let out = step_c(&state, 0.5);
        assert_eq!(out.q, vec![1.0]);
        assert_eq!(out.p, vec![2.0]);
        assert_eq!(out.s, 1.0);

        let rest = step_c(&ContactState::scalar(1.0, 0.0, 2.0, 0.0), 0.7);
        assert_eq!(rest.q, vec![1.0]);
        assert_eq!(rest.s, 2.0);

        let planar = step_c(&ContactState::planar([0.0, 0.0], [1.0, 1.0], 0.0, 0.0), 1.0);
        assert_eq!(planar.s, 1.0);
    }

    #[test]
    fn step_d_advances_time_additively() {
        let state = ContactState::scalar(1.0, 2.0, 3.0, 0.0);
        assert_eq!(step_d(&state, 0.0), state);
        assert_eq!(step_d(&state, 0.1).t, 0.1);
        let two_halves = step_d(&step_d(&state, 0.05), 0.05);
        assert_eq!(two_halves.t, step_d(&state, 0.1).t);
    }

    #[test]
    fn chi2_free_flight() {
        let state = ContactState::scalar(0.5, 2.0, 1.0, 3.0);
        let out = chi2_step(&FreeParticle, &state, 0.25).unwrap();
        assert!((out.q[0] - (0.5 + 0.25 * 2.0)).abs() < 1e-15);
        assert_eq!(out.p, vec![2.0]);
        assert!((out.s - (1.0 + 0.25 * 2.0)).abs() < 1e-15);
        assert!((out.t - 3.25).abs() < 1e-15);
    }

    #[test]
    fn chi2_reverses_for_autonomous_models() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(1.2, -0.7, 2.5, 0.0);
        let forward = chi2_step(&model, &state, 0.2).unwrap();
        let back = chi2_step(&model, &forward, -0.2).unwrap();
        for (a, b) in state
            .autonomous_coords()
            .iter()
            .zip(back.autonomous_coords().iter())
        {
            assert!(
                (a - b).abs() <= 1e-12,
                "reversal residual {}",
                (a - b).abs()
            );
        }
    }

    #[test]
    fn triple_jump_order4_coefficients() {
        let (g1, g2) = triple_jump_coefficients(4);
        assert!((g1 - 1.351_207_191_959_657_8).abs() < 1e-15);
        assert!((g2 + 1.702_414_383_919_315_5).abs() < 1e-14);
        assert!((g1 + g2 + g1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chi_step_order2_is_chi2() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(0.3, 0.4, 0.5, 0.0);
        let a = chi_step(&model, &state, 0.1, 2).unwrap();
        let b = chi2_step(&model, &state, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chi_step_rejects_odd_orders() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(0.0, 0.0, 0.0, 0.0);
        for order in [0, 1, 3, 5] {
            let err = chi_step(&model, &state, 0.1, order).unwrap_err();
            assert_eq!(err, StepError::UnsupportedOrder { order });
        }
    }

    #[test]
    fn chi2_identifies_failing_submap() {
        // a state far enough below the south pole that A(tau) blows up
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(0.0, 0.0, -25.0, 0.0);
        let err = chi2_step(&model, &state, 0.1).unwrap_err();
        assert_eq!(err.map(), Some("A (quadratic action)"));
    }
}
