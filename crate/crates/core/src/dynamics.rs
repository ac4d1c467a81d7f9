//! Evaluation of the contact Hamiltonian vector field, Hamiltonian
//! bookkeeping, and the contact-form preservation checker.

use thiserror::Error;

use crate::error::{ModelError, StepError};
use crate::models::SeparableContactModel;
use crate::state::{eta_at, ContactState};

/// Value of the contact Hamiltonian vector field at a state, extended with
/// `dt = 1` so that explicitly time-dependent systems become autonomous on
/// the extended space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVelocity {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
    pub ds: f64,
    pub dt: f64,
}

/// Contact Hamiltonian vector field of `H = |p|²/2 + V(q,t) + f(s,t)` in
/// canonical coordinates:
///
/// ```text
/// q̇ = ∂H/∂p = p
/// ṗ = −∂H/∂q − p ∂H/∂s = −∇V − p ∂f/∂s
/// ṡ = p·∂H/∂p − H = |p|²/2 − V − f
/// ṫ = 1
/// ```
pub fn contact_vector_field<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
) -> Result<PhaseVelocity, ModelError> {
    assert_eq!(
        model.dim(),
        state.dim(),
        "model and state dimensions differ"
    );
    model.note_vector_field_eval();
    let grad = model.grad_potential(&state.q, state.t)?;
    let potential = model.potential(&state.q, state.t)?;
    let f = model.action_term(state.s, state.t);
    let f_s = model.action_term_ds(state.s, state.t);
    let kinetic = 0.5 * state.momentum_norm_squared();
    Ok(PhaseVelocity {
        dq: state.p.clone(),
        dp: state
            .p
            .iter()
            .zip(grad.iter())
            .map(|(pi, gi)| -gi - pi * f_s)
            .collect(),
        ds: kinetic - potential - f,
        dt: 1.0,
    })
}

/// `H(q, p, s, t) = |p|²/2 + V(q, t) + f(s, t)`.
pub fn hamiltonian<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
) -> Result<f64, ModelError> {
    assert_eq!(
        model.dim(),
        state.dim(),
        "model and state dimensions differ"
    );
    Ok(0.5 * state.momentum_norm_squared()
        + model.potential(&state.q, state.t)?
        + model.action_term(state.s, state.t))
}

/// Instantaneous rate of change of the Hamiltonian along the flow.
///
/// For autonomous models this is `−H ∂H/∂s = −H ∂f/∂s`, which vanishes
/// exactly on the invariant set `H = 0`. For explicitly time-dependent
/// models the partial-time contribution `∂V/∂t + ∂f/∂t` is added so that
/// the value matches the true `dH/dt`.
pub fn hamiltonian_drift<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
) -> Result<f64, ModelError> {
    let h = hamiltonian(model, state)?;
    let f_s = model.action_term_ds(state.s, state.t);
    let v_t = model.potential_dt(&state.q, state.t)?;
    let f_t = model.action_term_dt(state.s, state.t);
    Ok(-h * f_s + v_t + f_t)
}

/// Failure of the contact-form defect checker.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DefectError {
    /// The pulled-back covector has near-zero magnitude: the map collapsed.
    #[error("pulled-back contact form has near-zero magnitude {norm:.3e}")]
    DegenerateForm { norm: f64 },
    #[error(transparent)]
    Step(#[from] StepError),
}

/// How far a one-step map is from being a contact transformation at `state`.
///
/// The Jacobian `J` of the map restricted to `(q, p, s)` is computed by
/// central finite differences with step `fd_step`; the contact form at the
/// image point is pulled back through `J` and compared against the best
/// scalar multiple of the contact form at `state`:
///
/// ```text
/// defect = min_λ ‖ηᵀ(Φ(x))·J − λ·η(x)‖ / ‖ηᵀ(Φ(x))·J‖
/// ```
///
/// A contact transformation gives a defect at the finite-difference noise
/// floor (≈1e-9 for `fd_step = 1e-6`); a non-contact map gives an O(1)
/// multiple of its structure violation. `step` closes over the model and
/// the step size.
pub fn contact_form_defect<F>(
    step: F,
    state: &ContactState,
    fd_step: f64,
) -> Result<f64, DefectError>
where
    F: Fn(&ContactState) -> Result<ContactState, StepError>,
{
    assert!(fd_step > 0.0, "finite-difference step must be positive");
    let m = 2 * state.dim() + 1;
    let base_coords = state.autonomous_coords();

    // columns of the Jacobian of (q,p,s) -> (q',p',s'), t held at state.t
    let mut jacobian = vec![vec![0.0; m]; m];
    for j in 0..m {
        let mut plus = base_coords.clone();
        let mut minus = base_coords.clone();
        plus[j] += fd_step;
        minus[j] -= fd_step;
        let image_plus = step(&ContactState::from_autonomous_coords(&plus, state.t))?;
        let image_minus = step(&ContactState::from_autonomous_coords(&minus, state.t))?;
        let coords_plus = image_plus.autonomous_coords();
        let coords_minus = image_minus.autonomous_coords();
        for i in 0..m {
            jacobian[i][j] = (coords_plus[i] - coords_minus[i]) / (2.0 * fd_step);
        }
    }

    let image = step(state)?;
    let eta_image = eta_at(&image).flatten();
    // pulled-back covector: c'_j = sum_i eta_i(Phi(x)) J_ij
    let pulled_back: Vec<f64> = (0..m)
        .map(|j| (0..m).map(|i| eta_image[i] * jacobian[i][j]).sum())
        .collect();
    let eta_here = eta_at(state).flatten();

    let norm_pulled = norm(&pulled_back);
    if norm_pulled < 1e-12 * (1.0 + norm(&eta_here)) {
        return Err(DefectError::DegenerateForm { norm: norm_pulled });
    }

    // least-squares multiplier lambda = <eta, c'> / <eta, eta>
    let lambda = dot(&eta_here, &pulled_back) / dot(&eta_here, &eta_here);
    let residual: Vec<f64> = pulled_back
        .iter()
        .zip(eta_here.iter())
        .map(|(cp, c)| cp - lambda * c)
        .collect();
    Ok(norm(&residual) / norm_pulled)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
