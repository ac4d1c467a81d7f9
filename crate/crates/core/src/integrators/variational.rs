//! Explicit second-order contact variational integrator and the discrete
//! momenta of its variational principle.
//!
//! The discrete Lagrangian over one interval `(q₀, q₁, s₀)` at time `t` is
//!
//! ```text
//! L = |q₁ − q₀|²/(2τ²) − (V(q₀,t) + V(q₁,t+τ))/2 − F-term
//! ```
//!
//! with trapezoidal potential. The action update uses the action term
//! averaged over the interval endpoints, `(F(s₀,t) + F(s₁,t+τ))/2`, solved
//! exactly for `s₁` (Newton, a couple of iterations); this endpoint-averaged
//! form is what makes the map an exact contact transformation — evaluating
//! `F` at `s₀` alone loses the contact property at O(τ²) per step. Both
//! choices agree to second order, so the convergence order is unchanged.

use crate::error::StepError;
use crate::models::SeparableContactModel;
use crate::state::ContactState;

const DEGENERATE_DENOMINATOR_TOL: f64 = 1e-12;

/// Carried endpoint data for gradient reuse across consecutive steps: the
/// gradient and potential at the end of the previous step equal the ones
/// needed at the start of the next.
#[derive(Debug, Clone)]
pub struct CviCarry {
    pub grad: Vec<f64>,
    pub potential: f64,
}

/// One step of the explicit contact variational integrator:
///
/// ```text
/// q₁ = q₀ − (τ²/2) ∇V(q₀,t) + p₀ (τ − (τ²/2) ∂F/∂s(s₀,t))
/// s₁ = s₀ + τ L(t, q₀, q₁, s₀, s₁)          (exact endpoint-averaged form)
/// p₁ = [(1 − (τ/2) ∂F/∂s(s₀,t)) p₀ − (τ/2)(∇V(q₀,t) + ∇V(q₁,t+τ))]
///      / [1 + (τ/2) ∂F/∂s(s₁,t+τ)]
/// ```
///
/// with `t₁ = t + τ`. Errors: a model singularity at either endpoint, a
/// vanishing `p`-update denominator, or an action update with no real
/// solution.
pub fn cvi2_step<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
) -> Result<ContactState, StepError> {
    cvi2_step_carried(model, state, tau, None).map(|(next, _)| next)
}

/// [`cvi2_step`] with endpoint reuse: pass the carry returned by the
/// previous step (for the same trajectory) to avoid re-evaluating `∇V` and
/// `V` at the shared point, halving the per-step gradient cost.
pub fn cvi2_step_carried<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
    carry: Option<CviCarry>,
) -> Result<(ContactState, CviCarry), StepError> {
    let wrap = |source| StepError::Model {
        map: "CVI (variational step)",
        source,
    };
    let (t0, t1) = (state.t, state.t + tau);
    let (grad0, potential0) = match carry {
        Some(c) => (c.grad, c.potential),
        None => (
            model.grad_potential(&state.q, t0).map_err(wrap)?,
            model.potential(&state.q, t0).map_err(wrap)?,
        ),
    };
    let f_s0 = model.action_term_ds(state.s, t0);

    let momentum_factor = tau - 0.5 * tau * tau * f_s0;
    let q1: Vec<f64> = state
        .q
        .iter()
        .zip(state.p.iter())
        .zip(grad0.iter())
        .map(|((qi, pi), gi)| qi - 0.5 * tau * tau * gi + pi * momentum_factor)
        .collect();

    let grad1 = model.grad_potential(&q1, t1).map_err(wrap)?;
    let potential1 = model.potential(&q1, t1).map_err(wrap)?;

    let kinetic = state
        .q
        .iter()
        .zip(q1.iter())
        .map(|(q0i, q1i)| (q1i - q0i) * (q1i - q0i))
        .sum::<f64>()
        / (2.0 * tau * tau);
    let conservative = kinetic - 0.5 * (potential0 + potential1);
    let s1 = solve_action_update(model, conservative, state.s, t0, t1, tau)?;

    let denominator = 1.0 + 0.5 * tau * model.action_term_ds(s1, t1);
    if denominator.abs() < DEGENERATE_DENOMINATOR_TOL {
        return Err(StepError::DegenerateDenominator {
            map: "CVI (momentum update)",
            denominator,
        });
    }
    let p1: Vec<f64> = state
        .p
        .iter()
        .zip(grad0.iter())
        .zip(grad1.iter())
        .map(|((pi, g0i), g1i)| {
            ((1.0 - 0.5 * tau * f_s0) * pi - 0.5 * tau * (g0i + g1i)) / denominator
        })
        .collect();

    Ok((
        ContactState {
            q: q1,
            p: p1,
            s: s1,
            t: t1,
        },
        CviCarry {
            grad: grad1,
            potential: potential1,
        },
    ))
}

/// Solve the implicit action update
/// `s₁ = s₀ + τ·(conservative − (F(s₀,t₀) + F(s₁,t₁))/2)` for `s₁`.
///
/// `conservative` is the kinetic-minus-mean-potential part of the discrete
/// Lagrangian. Newton iteration from the `F(s₀)`-only estimate, driven to
/// machine convergence; failure to converge (no real solution, as happens
/// when a quadratic action term pushes the update past its turning point)
/// is reported as a degenerate update.
fn solve_action_update<M: SeparableContactModel + ?Sized>(
    model: &M,
    conservative: f64,
    s0: f64,
    t0: f64,
    t1: f64,
    tau: f64,
) -> Result<f64, StepError> {
    let f0 = model.action_term(s0, t0);
    let base = s0 + tau * conservative - 0.5 * tau * f0;
    // G(s1) = s1 - base + (tau/2) F(s1, t1), G'(s1) = 1 + (tau/2) dF/ds
    let mut s1 = s0 + tau * (conservative - f0);
    let mut converged = false;
    for _ in 0..100 {
        let residual = s1 - base + 0.5 * tau * model.action_term(s1, t1);
        let slope = 1.0 + 0.5 * tau * model.action_term_ds(s1, t1);
        if !s1.is_finite() || slope.abs() < DEGENERATE_DENOMINATOR_TOL {
            return Err(StepError::DegenerateDenominator {
                map: "CVI (action update)",
                denominator: slope,
            });
        }
        let delta = residual / slope;
        s1 -= delta;
        if delta.abs() <= 1e-15 * (1.0 + s1.abs()) {
            converged = true;
            break;
        }
    }
    if !converged || !s1.is_finite() {
        return Err(StepError::DegenerateDenominator {
            map: "CVI (action update)",
            denominator: 1.0 + 0.5 * tau * model.action_term_ds(s1, t1),
        });
    }
    Ok(s1)
}

/// The two discrete momenta defined by one interval `(q_prev → q_next,
/// s_prev, t)` of the discrete variational principle, returned as
/// `(p_minus, p_plus)`:
///
/// * `p_plus` is the outgoing momentum at the interval's left end,
/// * `p_minus` is the incoming momentum at its right end.
///
/// Along a trajectory of [`cvi2_step`] the incoming momentum of one
/// interval equals the outgoing momentum of the next — that matching
/// condition is the discrete Euler–Lagrange equation, and it holds exactly
/// (to roundoff) because the integrator is constructed from it.
pub fn discrete_momenta<M: SeparableContactModel + ?Sized>(
    model: &M,
    q_prev: &[f64],
    q_next: &[f64],
    s_prev: f64,
    t: f64,
    tau: f64,
) -> Result<(Vec<f64>, Vec<f64>), StepError> {
    let wrap = |source| StepError::Model {
        map: "discrete momenta",
        source,
    };
    let t1 = t + tau;
    let grad_prev = model.grad_potential(q_prev, t).map_err(wrap)?;
    let grad_next = model.grad_potential(q_next, t1).map_err(wrap)?;
    let potential_prev = model.potential(q_prev, t).map_err(wrap)?;
    let potential_next = model.potential(q_next, t1).map_err(wrap)?;

    let kinetic = q_prev
        .iter()
        .zip(q_next.iter())
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        / (2.0 * tau * tau);
    let conservative = kinetic - 0.5 * (potential_prev + potential_next);
    let s_next = solve_action_update(model, conservative, s_prev, t, t1, tau)?;

    let den_plus = 1.0 - 0.5 * tau * model.action_term_ds(s_prev, t);
    let den_minus = 1.0 + 0.5 * tau * model.action_term_ds(s_next, t1);
    for (label, den) in [("outgoing", den_plus), ("incoming", den_minus)] {
        if den.abs() < DEGENERATE_DENOMINATOR_TOL {
            return Err(StepError::DegenerateDenominator {
                map: match label {
                    "outgoing" => "discrete momenta (outgoing)",
                    _ => "discrete momenta (incoming)",
                },
                denominator: den,
            });
        }
    }

    let velocity: Vec<f64> = q_prev
        .iter()
        .zip(q_next.iter())
        .map(|(a, b)| (b - a) / tau)
        .collect();
    let p_plus: Vec<f64> = velocity
        .iter()
        .zip(grad_prev.iter())
        .map(|(v, g)| (v + 0.5 * tau * g) / den_plus)
        .collect();
    let p_minus: Vec<f64> = velocity
        .iter()
        .zip(grad_next.iter())
        .map(|(v, g)| (v - 0.5 * tau * g) / den_minus)
        .collect();
    Ok((p_minus, p_plus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{LinearDampedOscillator, QuadraticActionOscillator};

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
    fn free_particle_step() {
        let state = ContactState::scalar(0.0, 2.0, 1.0, 0.0);
        let out = cvi2_step(&FreeParticle, &state, 0.5).unwrap();
        assert!((out.q[0] - 1.0).abs() < 1e-15);
        assert_eq!(out.p, vec![2.0]);
        // L reduces to the kinetic term p^2/2 = 2
        assert!((out.s - 2.0).abs() < 1e-15);
        assert_eq!(out.t, 0.5);
    }

    #[test]
    fn undamped_oscillator_reduces_to_stormer_verlet() {
        let model = LinearDampedOscillator::new(1.3, 0.0);
        let w2 = 1.3 * 1.3;
        let tau = 0.21;
        let (q0, p0) = (0.7, -0.4);
        let out = cvi2_step(&model, &ContactState::scalar(q0, p0, 0.0, 0.0), tau).unwrap();
        // classical velocity-Verlet update for comparison
        let q1 = q0 + tau * p0 - 0.5 * tau * tau * w2 * q0;
        let p1 = p0 - 0.5 * tau * (w2 * q0 + w2 * q1);
        assert!((out.q[0] - q1).abs() < 1e-15);
        assert!((out.p[0] - p1).abs() < 1e-15);
    }

    #[test]
    fn carry_reuses_the_endpoint_gradient() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(0.4, -0.6, 1.0, 0.0);
        let (first, carry) = cvi2_step_carried(&model, &state, 0.1, None).unwrap();
        let (with_carry, _) = cvi2_step_carried(&model, &first, 0.1, Some(carry)).unwrap();
        let (without, _) = cvi2_step_carried(&model, &first, 0.1, None).unwrap();
        assert_eq!(with_carry, without);
    }

    #[test]
    fn free_particle_momenta_match_the_momentum() {
        let p = 1.7;
        let tau = 0.3;
        let (p_minus, p_plus) =
            discrete_momenta(&FreeParticle, &[0.0], &[tau * p], 5.0, 0.0, tau).unwrap();
        assert!((p_minus[0] - p).abs() < 1e-15);
        assert!((p_plus[0] - p).abs() < 1e-15);
    }

    #[test]
    fn off_shell_interval_splits_the_momenta() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(0.5, 1.0, 0.5, 0.0);
        let tau = 0.1;
        let next = cvi2_step(&model, &state, tau).unwrap();

        // on-shell: both momenta agree with the trajectory
        let (p_minus, p_plus) =
            discrete_momenta(&model, &state.q, &next.q, state.s, state.t, tau).unwrap();
        assert!((p_plus[0] - state.p[0]).abs() < 1e-13);
        assert!((p_minus[0] - next.p[0]).abs() < 1e-13);

        // perturbing the right endpoint breaks the matching linearly
        let mut residuals = Vec::new();
        for eps in [1e-5, 2e-5, 4e-5] {
            let q_perturbed = vec![next.q[0] + eps];
            let (pm, pp) =
                discrete_momenta(&model, &state.q, &q_perturbed, state.s, state.t, tau).unwrap();
            // compare the two momenta this interval implies at its left end:
            // the trajectory's p and the recomputed outgoing momentum
            let _ = pm;
            residuals.push((pp[0] - state.p[0]).abs());
        }
        assert!(residuals[0] > 1e-8);
        let ratio1 = residuals[1] / residuals[0];
        let ratio2 = residuals[2] / residuals[1];
        assert!((ratio1 - 2.0).abs() < 0.05, "ratio {ratio1}");
        assert!((ratio2 - 2.0).abs() < 0.05, "ratio {ratio2}");
    }

    #[test]
    fn action_update_detects_unsolvable_step() {
        // far below the south pole the averaged quadratic action equation
        // loses its real root for large enough tau
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let state = ContactState::scalar(0.0, 0.0, -60.0, 0.0);
        let err = cvi2_step(&model, &state, 0.5).unwrap_err();
        assert!(matches!(err, StepError::DegenerateDenominator { .. }));
    }
}
