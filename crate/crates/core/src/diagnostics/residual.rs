//! Generalized Euler–Lagrange residual along a sampled trajectory.

use crate::diagnostics::DiagnosticsError;
use crate::integrators::Trajectory;
use crate::models::SeparableContactModel;

/// Evaluate the generalized Euler–Lagrange residual
///
/// ```text
/// ∂L/∂q − d/dt(∂L/∂q̇) + (∂L/∂s)(∂L/∂q̇)
///   = −∇V(q,t) − q̈ − ∂f/∂s(s,t) · q̇
/// ```
///
/// along a uniformly sampled trajectory, with `q̇` and `q̈` from central
/// finite differences, and return the max norm over interior samples. An
/// exact solution of the dissipative dynamics gives a residual at the
/// finite-difference floor; a consistent discretization gives O(h²).
pub fn gel_residual<M: SeparableContactModel + ?Sized>(
    trajectory: &Trajectory,
    model: &M,
) -> Result<f64, DiagnosticsError> {
    let samples = &trajectory.samples;
    if samples.len() < 3 {
        return Err(DiagnosticsError::InsufficientSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    let h = samples[1].t - samples[0].t;
    if h <= 0.0 {
        return Err(DiagnosticsError::NonUniformSampling {
            expected: h,
            found: h,
            index: 1,
        });
    }
    for (index, pair) in samples.windows(2).enumerate() {
        let dt = pair[1].t - pair[0].t;
        if (dt - h).abs() > 1e-9 * h.max(1.0) {
            return Err(DiagnosticsError::NonUniformSampling {
                expected: h,
                found: dt,
                index: index + 1,
            });
        }
    }

    let mut max_residual = 0.0_f64;
    for window in samples.windows(3) {
        let (prev, here, next) = (&window[0], &window[1], &window[2]);
        let grad = model.grad_potential(&here.q, here.t)?;
        let f_s = model.action_term_ds(here.s, here.t);
        for (i, grad_i) in grad.iter().enumerate() {
            let qdot = (next.q[i] - prev.q[i]) / (2.0 * h);
            let qddot = (next.q[i] - 2.0 * here.q[i] + prev.q[i]) / (h * h);
            let residual = -grad_i - qddot - f_s * qdot;
            max_residual = max_residual.max(residual.abs());
        }
    }
    Ok(max_residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrators::{integrate, StepMethod, Trajectory};
    use crate::models::{damped_oscillator_exact, LinearDampedOscillator};
    use crate::state::ContactState;

    fn exact_trajectory(h: f64, count: usize) -> Trajectory {
        let samples: Vec<ContactState> = (0..count)
            .map(|k| {
                let t = k as f64 * h;
                let (q, p) = damped_oscillator_exact(1.0, 0.0, 1.0, 0.2, t).unwrap();
                ContactState::scalar(q, p, 0.0, t)
            })
            .collect();
        Trajectory {
            samples,
            method: StepMethod::chi2(),
            tau: h,
            status: crate::integrators::RunStatus::Completed,
            counters: Default::default(),
            steps_taken: (count - 1) as u64,
        }
    }

    #[test]
    fn exact_solution_satisfies_the_equations() {
        let model = LinearDampedOscillator::new(1.0, 0.2);
        let residual = gel_residual(&exact_trajectory(1e-3, 2001), &model).unwrap();
        assert!(residual <= 1e-4, "residual {residual} above FD floor");
    }

    #[test]
    fn linear_model_discrete_equations_match_the_difference_form_exactly() {
        // with a linear gradient and constant damping the integrator's
        // discrete equations coincide with the central-difference residual
        // formula, so only roundoff remains
        let model = LinearDampedOscillator::new(1.0, 0.2);
        let start = ContactState::scalar(1.0, 0.0, 0.0, 0.0);
        let run = integrate(&model, StepMethod::cvi2(), &start, 0.05, 10.0, 1);
        let residual = gel_residual(&run, &model).unwrap();
        assert!(residual <= 1e-10, "residual {residual} above roundoff");
    }

    #[test]
    fn variational_trajectories_satisfy_the_difference_equations_exactly() {
        // adding the two momentum relations of the variational step shows
        // p_k is the central-difference velocity and the step satisfies the
        // central-difference form of the equations identically, for any
        // model; only roundoff remains
        let model = crate::models::QuadraticActionOscillator::new(1.0, 18.0);
        let start = ContactState::scalar(0.0, -1.0, -1.0, 0.0);
        let run = integrate(&model, StepMethod::cvi2(), &start, 0.05, 10.0, 1);
        let residual = gel_residual(&run, &model).unwrap();
        assert!(residual <= 1e-10, "residual {residual} above roundoff");
    }

    #[test]
    fn residual_shrinks_quadratically_for_non_variational_steps() {
        let model = crate::models::QuadraticActionOscillator::new(1.0, 18.0);
        let start = ContactState::scalar(0.0, -1.0, -1.0, 0.0);
        let res = |tau: f64| {
            let run = integrate(&model, StepMethod::chi2(), &start, tau, 10.0, 1);
            gel_residual(&run, &model).unwrap()
        };
        let coarse = res(0.05);
        let fine = res(0.025);
        let ratio = coarse / fine;
        assert!(
            (2.8..5.6).contains(&ratio),
            "expected ~4x residual reduction, got {ratio} ({coarse:.3e} -> {fine:.3e})"
        );
    }

    #[test]
    fn resting_trajectory_has_zero_residual() {
        let model = LinearDampedOscillator::new(1.0, 0.7);
        let samples: Vec<ContactState> = (0..5)
            .map(|k| ContactState::scalar(0.0, 0.0, 1.0, 0.1 * k as f64))
            .collect();
        let trajectory = Trajectory {
            samples,
            method: StepMethod::chi2(),
            tau: 0.1,
            status: crate::integrators::RunStatus::Completed,
            counters: Default::default(),
            steps_taken: 4,
        };
        assert_eq!(gel_residual(&trajectory, &model).unwrap(), 0.0);
    }

    #[test]
    fn too_few_samples_are_rejected() {
        let model = LinearDampedOscillator::new(1.0, 0.2);
        let short = exact_trajectory(1e-3, 2);
        assert!(matches!(
            gel_residual(&short, &model),
            Err(DiagnosticsError::InsufficientSamples { .. })
        ));
    }
}
