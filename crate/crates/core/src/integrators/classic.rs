//! Non-geometric baselines: classical RK4 and explicit midpoint, applied to
//! the contact vector field extended with `ṫ = 1`.

use crate::dynamics::{contact_vector_field, PhaseVelocity};
use crate::error::StepError;
use crate::models::SeparableContactModel;
use crate::state::ContactState;

fn advanced(state: &ContactState, velocity: &PhaseVelocity, h: f64) -> ContactState {
    ContactState {
        q: state
            .q
            .iter()
            .zip(velocity.dq.iter())
            .map(|(x, v)| x + h * v)
            .collect(),
        p: state
            .p
            .iter()
            .zip(velocity.dp.iter())
            .map(|(x, v)| x + h * v)
            .collect(),
        s: state.s + h * velocity.ds,
        t: state.t + h * velocity.dt,
    }
}

fn field<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
) -> Result<PhaseVelocity, StepError> {
    contact_vector_field(model, state).map_err(|source| StepError::Model {
        map: "vector field",
        source,
    })
}

/// Classical fourth-order Runge-Kutta step (4 field evaluations).
pub fn rk4_step<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
) -> Result<ContactState, StepError> {
    let half = 0.5 * tau;
    let k1 = field(model, state)?;
    let k2 = field(model, &advanced(state, &k1, half))?;
    let k3 = field(model, &advanced(state, &k2, half))?;
    let k4 = field(model, &advanced(state, &k3, tau))?;
    let n = state.dim();
    let combine = |a: &[f64], b: &[f64], c: &[f64], d: &[f64], i: usize| {
        (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]) / 6.0
    };
    Ok(ContactState {
        q: (0..n)
            .map(|i| state.q[i] + tau * combine(&k1.dq, &k2.dq, &k3.dq, &k4.dq, i))
            .collect(),
        p: (0..n)
            .map(|i| state.p[i] + tau * combine(&k1.dp, &k2.dp, &k3.dp, &k4.dp, i))
            .collect(),
        s: state.s + tau * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds) / 6.0,
        t: state.t + tau * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt) / 6.0,
    })
}

/// Explicit midpoint step (2 field evaluations).
pub fn midpoint_step<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    tau: f64,
) -> Result<ContactState, StepError> {
    let k1 = field(model, state)?;
    let k2 = field(model, &advanced(state, &k1, 0.5 * tau))?;
    Ok(advanced(state, &k2, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PerturbedKepler;

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
    fn free_flight_is_exact_for_both_schemes() {
        let state = ContactState::scalar(0.25, 1.5, 0.5, 1.0);
        for step in [rk4_step::<FreeParticle>, midpoint_step::<FreeParticle>] {
            let out = step(&FreeParticle, &state, 0.4).unwrap();
            assert_eq!(out.q[0], 0.25 + 0.4 * 1.5);
            assert_eq!(out.p, vec![1.5]);
            assert!((out.s - (0.5 + 0.4 * 1.5 * 1.5 / 2.0)).abs() < 1e-15);
            assert!((out.t - 1.4).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_stage_is_reported() {
        let model = PerturbedKepler::with_guard(1.0, 0.0, 1.0, 0.5);
        // first stage is fine but the drift carries q inside the guard
        let state = ContactState::planar([0.6, 0.0], [-1.0, 0.0], 0.0, 0.0);
        let err = rk4_step(&model, &state, 0.5).unwrap_err();
        assert!(matches!(err, StepError::Model { .. }));
    }
}
