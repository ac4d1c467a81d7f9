//! Invariant-surface and fixed-point diagnostics for the quadratic-action
//! oscillator.

use nalgebra::{DMatrix, DVector};

use crate::diagnostics::DiagnosticsError;
use crate::error::StepError;
use crate::integrators::Stepper;
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// Deviation of a state from the zero level set of the oscillator
/// Hamiltonian, measured as the radial distance
/// `|√(q² + p² + γs²) − √(2C)|` (for `γ = 1` this is the literal distance
/// from the invariant sphere of radius `√(2C)`).
pub fn sphere_distance(state: &ContactState, gamma: f64, offset: f64) -> f64 {
    let radius2 = state
        .q
        .iter()
        .chain(state.p.iter())
        .map(|x| x * x)
        .sum::<f64>()
        + gamma * state.s * state.s;
    (radius2.sqrt() - (2.0 * offset).sqrt()).abs()
}

/// Equilibrium action coordinates of the oscillator: the flow's poles at
/// `±√(2C/γ)` and the discrete map's shifted poles at
/// `±½√(8C/γ + τ²C²)`. The two pairs coincide at `τ = 0` and differ at
/// O(τ²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorFixedPoints {
    pub continuous_north: f64,
    pub continuous_south: f64,
    pub shifted_north: f64,
    pub shifted_south: f64,
}

pub fn oscillator_fixed_points(gamma: f64, offset: f64, tau: f64) -> OscillatorFixedPoints {
    assert!(gamma > 0.0 && offset > 0.0, "gamma and C must be positive");
    assert!(tau >= 0.0, "tau must be non-negative");
    let continuous = (2.0 * offset / gamma).sqrt();
    let shifted = 0.5 * (8.0 * offset / gamma + tau * tau * offset * offset).sqrt();
    OscillatorFixedPoints {
        continuous_north: continuous,
        continuous_south: -continuous,
        shifted_north: shifted,
        shifted_south: -shifted,
    }
}

/// Options for the Newton fixed-point search.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions {
    pub max_iters: usize,
    pub tolerance: f64,
    pub fd_step: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            max_iters: 50,
            tolerance: 1e-12,
            fd_step: 1e-7,
        }
    }
}

/// A numerically located fixed point of a one-step map and the moduli of
/// the map's Jacobian eigenvalues there.
#[derive(Debug, Clone)]
pub struct FixedPointAnalysis {
    pub state: ContactState,
    /// Eigenvalue moduli of the Jacobian at the fixed point, descending.
    pub eigenvalue_moduli: Vec<f64>,
    pub iterations: usize,
}

impl FixedPointAnalysis {
    /// Linearly stable: every eigenvalue modulus at most 1 (to roundoff).
    pub fn is_stable(&self) -> bool {
        self.eigenvalue_moduli.iter().all(|&m| m <= 1.0 + 1e-9)
    }
}

/// Newton search (finite-difference Jacobian) for a fixed point of the
/// one-step map `Φ` defined by `method` and `tau`, restricted to the
/// autonomous coordinates `(q, p, s)` with `t` frozen at `guess.t`.
///
/// Returns the fixed point together with the eigenvalue moduli of `∂Φ/∂x`
/// there; all moduli at most 1 means linear stability.
pub fn numerical_fixed_point<M: SeparableContactModel + ?Sized>(
    model: &M,
    method: crate::integrators::StepMethod,
    tau: f64,
    guess: &ContactState,
    options: FixedPointOptions,
) -> Result<FixedPointAnalysis, DiagnosticsError> {
    let m = 2 * guess.dim() + 1;
    let t = guess.t;
    let apply = |coords: &[f64]| -> Result<Vec<f64>, StepError> {
        // fresh stepper per application: no carried data across probes
        let mut stepper = Stepper::new(method);
        let state = ContactState::from_autonomous_coords(coords, t);
        Ok(stepper.step(model, &state, tau)?.autonomous_coords())
    };

    let mut x = guess.autonomous_coords();
    let mut residual_norm = f64::INFINITY;
    let mut converged_at = None;
    for iteration in 0..options.max_iters {
        let image = apply(&x)?;
        let residual: Vec<f64> = image.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        residual_norm = residual.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()));
        if residual_norm <= options.tolerance {
            converged_at = Some(iteration);
            break;
        }
        let jac = fd_jacobian(&apply, &x, options.fd_step)?;
        // solve (J - I) dx = -residual
        let mut system = jac.clone();
        for i in 0..m {
            system[(i, i)] -= 1.0;
        }
        let rhs = DVector::from_iterator(m, residual.iter().map(|r| -r));
        let delta = system
            .lu()
            .solve(&rhs)
            .ok_or(DiagnosticsError::NoConvergence {
                max_iters: options.max_iters,
                residual: residual_norm,
            })?;
        for i in 0..m {
            x[i] += delta[i];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(DiagnosticsError::NoConvergence {
                max_iters: options.max_iters,
                residual: residual_norm,
            });
        }
    }
    let iterations = converged_at.ok_or(DiagnosticsError::NoConvergence {
        max_iters: options.max_iters,
        residual: residual_norm,
    })?;

    let jac = fd_jacobian(&apply, &x, options.fd_step)?;
    let mut moduli: Vec<f64> = jac.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).expect("finite moduli"));

    Ok(FixedPointAnalysis {
        state: ContactState::from_autonomous_coords(&x, t),
        eigenvalue_moduli: moduli,
        iterations,
    })
}

fn fd_jacobian<F>(apply: &F, x: &[f64], fd_step: f64) -> Result<DMatrix<f64>, DiagnosticsError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, StepError>,
{
    let m = x.len();
    let mut jac = DMatrix::zeros(m, m);
    for j in 0..m {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[j] += fd_step;
        minus[j] -= fd_step;
        let image_plus = apply(&plus)?;
        let image_minus = apply(&minus)?;
        for i in 0..m {
            jac[(i, j)] = (image_plus[i] - image_minus[i]) / (2.0 * fd_step);
        }
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrators::StepMethod;
    use crate::models::QuadraticActionOscillator;

    #[test]
    fn sphere_distance_reference_points() {
        let north = ContactState::scalar(0.0, 0.0, 6.0, 0.0);
        assert_eq!(sphere_distance(&north, 1.0, 18.0), 0.0);
        let center = ContactState::scalar(0.0, 0.0, 0.0, 0.0);
        assert_eq!(sphere_distance(&center, 1.0, 18.0), 6.0);
        let equator = ContactState::scalar(6.0, 0.0, 0.0, 0.0);
        assert_eq!(sphere_distance(&equator, 1.0, 18.0), 0.0);
    }

    #[test]
    fn fixed_point_formulas_coincide_at_zero_step() {
        let fp = oscillator_fixed_points(1.0, 18.0, 0.0);
        assert_eq!(fp.continuous_north, 6.0);
        assert_eq!(fp.shifted_north, 6.0);
        assert_eq!(fp.continuous_south, -6.0);
        assert_eq!(fp.shifted_south, -6.0);
    }

    #[test]
    fn shifted_pole_value_and_quadratic_approach() {
        let fp = oscillator_fixed_points(1.0, 18.0, 0.1);
        let expected = 0.5 * (8.0 * 18.0 + 0.01 * 324.0_f64).sqrt();
        assert_eq!(fp.shifted_north, expected);
        assert!((expected - 6.0671).abs() < 1e-4);

        // shift is O(tau^2): quartering when tau halves, up to O(tau^4)
        let shift = |tau: f64| oscillator_fixed_points(1.0, 18.0, tau).shifted_north - 6.0;
        let ratio = shift(0.2) / shift(0.1);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn newton_finds_the_near_pole_fixed_points() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let north = numerical_fixed_point(
            &model,
            StepMethod::chi2(),
            0.1,
            &model.north_pole(),
            FixedPointOptions::default(),
        )
        .unwrap();
        assert!(north.state.q[0].abs() < 1e-10);
        assert!(north.state.p[0].abs() < 1e-10);
        assert!((north.state.s - 6.0).abs() < 0.18, "s* = {}", north.state.s);
        assert!(north.is_stable());

        let south = numerical_fixed_point(
            &model,
            StepMethod::chi2(),
            0.1,
            &model.south_pole(),
            FixedPointOptions::default(),
        )
        .unwrap();
        assert!(
            south.eigenvalue_moduli.iter().any(|&m| m > 1.0),
            "south pole should be unstable, moduli {:?}",
            south.eigenvalue_moduli
        );
    }

    #[test]
    fn tiny_step_fixed_point_approaches_the_pole() {
        let model = QuadraticActionOscillator::new(1.0, 18.0);
        let result = numerical_fixed_point(
            &model,
            StepMethod::chi2(),
            1e-4,
            &model.north_pole(),
            FixedPointOptions::default(),
        )
        .unwrap();
        assert!((result.state.s - 6.0).abs() < 1e-6);
    }
}
