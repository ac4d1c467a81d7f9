//! Shared helpers for the integration tests: a brute-force fixed-step
//! reference integrator (independent of the library's steppers) and
//! samplers for admissible random states.

#![allow(dead_code)]

use contact_dynamics::state::ContactState;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A seeded generator of admissible random states for one model.
pub type Sampler = fn(&mut ChaCha8Rng) -> ContactState;

/// Classical RK4 at micro-steps of size `h`, written directly against a
/// derivative closure so it shares nothing with the library's integrators.
/// Handles negative spans by stepping backwards.
pub fn reference_flow<F>(field: F, x0: &[f64], span: f64, h: f64) -> Vec<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let steps = ((span.abs() / h).round() as usize).max(1);
    let dt = span / steps as f64;
    let dim = x0.len();
    let mut x = x0.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut probe = vec![0.0; dim];
    for _ in 0..steps {
        field(&x, &mut k1);
        for i in 0..dim {
            probe[i] = x[i] + 0.5 * dt * k1[i];
        }
        field(&probe, &mut k2);
        for i in 0..dim {
            probe[i] = x[i] + 0.5 * dt * k2[i];
        }
        field(&probe, &mut k3);
        for i in 0..dim {
            probe[i] = x[i] + dt * k3[i];
        }
        field(&probe, &mut k4);
        for i in 0..dim {
            x[i] += dt * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
        }
    }
    x
}

/// Relative deviation `‖a − b‖ / (1 + ‖b‖)`.
pub fn relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / (1.0 + scale)
}

/// Random state admissible for the quadratic-action oscillator: `s` is kept
/// above the action sub-flow's blow-up guard for steps up to 0.5.
pub fn sample_quadratic_state(rng: &mut ChaCha8Rng) -> ContactState {
    ContactState::scalar(
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-2.5..3.0),
        0.0,
    )
}

pub fn sample_linear_state(rng: &mut ChaCha8Rng) -> ContactState {
    ContactState::scalar(
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(0.0..5.0),
    )
}

/// Random planar state away from the Kepler singularity (radius in
/// `[0.5, 2]`).
pub fn sample_kepler_state(rng: &mut ChaCha8Rng) -> ContactState {
    let radius = rng.random_range(0.5..2.0);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    ContactState::planar(
        [radius * angle.cos(), radius * angle.sin()],
        [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)],
        rng.random_range(-2.0..2.0),
        rng.random_range(0.0..4.0),
    )
}
