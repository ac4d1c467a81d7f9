//! Contact-structure preservation of single steps, measured through the
//! finite-difference pullback defect.

mod common;

use common::{sample_kepler_state, sample_linear_state, sample_quadratic_state, Sampler};
use contact_dynamics::dynamics::contact_form_defect;
use contact_dynamics::integrators::{chi2_step, cvi2_step, rk4_step, StepMethod, Stepper};
use contact_dynamics::models::{
    LinearDampedOscillator, PerturbedKepler, QuadraticActionOscillator, SeparableContactModel,
};
use contact_dynamics::state::ContactState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TAU: f64 = 0.1;
const FD_STEP: f64 = 1e-6;
const DEFECT_BOUND: f64 = 1e-6;

fn models_and_samplers() -> Vec<(Box<dyn SeparableContactModel>, Sampler)> {
    vec![
        (
            Box::new(QuadraticActionOscillator::new(1.0, 18.0)),
            sample_quadratic_state as Sampler,
        ),
        (
            Box::new(LinearDampedOscillator::new(1.0, 0.2)),
            sample_linear_state,
        ),
        (
            Box::new(PerturbedKepler::new(1.0, 0.05, std::f64::consts::PI)),
            sample_kepler_state,
        ),
    ]
}

#[test]
fn chi2_steps_preserve_the_contact_structure() {
    for (model, sampler) in models_and_samplers() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..100 {
            let state = sampler(&mut rng);
            let defect =
                contact_form_defect(|x| chi2_step(model.as_ref(), x, TAU), &state, FD_STEP)
                    .unwrap();
            assert!(
                defect <= DEFECT_BOUND,
                "{} trial {trial}: chi2 defect {defect:.3e}",
                model.name()
            );
        }
    }
}

#[test]
fn cvi2_steps_preserve_the_contact_structure() {
    for (model, sampler) in models_and_samplers() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for trial in 0..100 {
            let state = sampler(&mut rng);
            let defect =
                contact_form_defect(|x| cvi2_step(model.as_ref(), x, TAU), &state, FD_STEP)
                    .unwrap();
            assert!(
                defect <= DEFECT_BOUND,
                "{} trial {trial}: cvi2 defect {defect:.3e}",
                model.name()
            );
        }
    }
}

/// RK4 does not preserve the contact structure; its defect must dominate
/// the splitting integrator's at the same point once the action coordinate
/// is far from zero.
#[test]
fn rk4_defect_dominates_chi2_defect() {
    let model = QuadraticActionOscillator::new(1.0, 18.0);
    let state = ContactState::scalar(1.0, 1.0, 5.0, 0.0);
    let tau = 0.3;
    let chi2_defect = contact_form_defect(|x| chi2_step(&model, x, tau), &state, FD_STEP).unwrap();
    let rk4_defect = contact_form_defect(|x| rk4_step(&model, x, tau), &state, FD_STEP).unwrap();
    assert!(
        rk4_defect > 100.0 * chi2_defect,
        "expected a decisive gap, got rk4 {rk4_defect:.3e} vs chi2 {chi2_defect:.3e}"
    );
    assert!(rk4_defect > 1e-5, "rk4 defect suspiciously small");
}

/// The halved potential-action update is not the exact B sub-flow, and it
/// destroys the contact property of the composition; the defect checker
/// sees it immediately.
#[test]
fn halved_action_update_breaks_the_contact_property() {
    let model = QuadraticActionOscillator::new(1.0, 18.0);
    let state = ContactState::scalar(1.2, -0.8, 2.0, 0.0);
    let compat = StepMethod::chi2().with_b_map_compat(true);
    let defect = contact_form_defect(
        |x| Stepper::new(compat).step(&model, x, TAU),
        &state,
        FD_STEP,
    )
    .unwrap();
    assert!(
        defect > 1e-4,
        "halved update should break contact preservation, defect {defect:.3e}"
    );
}

/// The defect is invariant under composing exact contact maps: a midpoint
/// baseline loses it even on the exactly linear model.
#[test]
fn midpoint_is_not_contact_on_the_linear_model() {
    let model = LinearDampedOscillator::new(1.0, 0.4);
    let state = ContactState::scalar(1.0, 0.5, 3.0, 0.0);
    let defect = contact_form_defect(
        |x| contact_dynamics::integrators::midpoint_step(&model, x, 0.3),
        &state,
        FD_STEP,
    )
    .unwrap();
    assert!(defect > 1e-6, "midpoint defect {defect:.3e}");
}
