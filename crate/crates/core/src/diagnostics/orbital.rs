//! Two-body orbital elements for the planar Kepler problem.

use crate::diagnostics::DiagnosticsError;
use crate::error::ModelError;
use crate::integrators::Trajectory;
use crate::state::ContactState;

/// Instantaneous Keplerian elements of a planar state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalElements {
    /// Specific orbital energy `|p|²/2 − μ/|q|`.
    pub energy: f64,
    /// Scalar angular momentum `q₁p₂ − q₂p₁`.
    pub angular_momentum: f64,
    /// Eccentricity from the Laplace–Runge–Lenz vector.
    pub eccentricity: f64,
    /// Perihelion direction `atan2(e₂, e₁)` in radians.
    pub perihelion_angle: f64,
}

/// Compute the orbital elements of a planar state for the Kepler potential
/// `−μ/|q|`. The eccentricity vector is `e = (p × L)/μ − q/|q|`, which in
/// the plane (with scalar `L`) reads `e = (p₂L, −p₁L)/μ − q/|q|`.
pub fn kepler_elements(state: &ContactState, mu: f64) -> Result<OrbitalElements, ModelError> {
    assert_eq!(state.dim(), 2, "orbital elements need a planar state");
    let r = state.radius();
    if r <= 0.0 {
        return Err(ModelError::Singularity {
            radius: r,
            guard: 0.0,
        });
    }
    let (q1, q2) = (state.q[0], state.q[1]);
    let (p1, p2) = (state.p[0], state.p[1]);
    let energy = 0.5 * state.momentum_norm_squared() - mu / r;
    let angular_momentum = q1 * p2 - q2 * p1;
    let e1 = p2 * angular_momentum / mu - q1 / r;
    let e2 = -p1 * angular_momentum / mu - q2 / r;
    Ok(OrbitalElements {
        energy,
        angular_momentum,
        eccentricity: (e1 * e1 + e2 * e2).sqrt(),
        perihelion_angle: e2.atan2(e1),
    })
}

/// Mean perihelion drift rate (radians per time unit) along a sampled
/// Kepler trajectory: the least-squares slope of the perihelion angle,
/// unwrapped across branch cuts, against time. Quantifies the artificial
/// precession a large-step integrator imprints on the orbit; there is no
/// exact value to assert, so callers report it.
///
/// Near-circular states carry a poorly conditioned perihelion direction,
/// so samples with eccentricity below `min_eccentricity` are skipped; if
/// fewer than two samples remain the rate is reported as 0.
pub fn precession_rate(
    trajectory: &Trajectory,
    mu: f64,
    min_eccentricity: f64,
) -> Result<f64, DiagnosticsError> {
    let mut times = Vec::new();
    let mut angles: Vec<f64> = Vec::new();
    for state in &trajectory.samples {
        let elements = kepler_elements(state, mu)?;
        if elements.eccentricity < min_eccentricity {
            continue;
        }
        let mut angle = elements.perihelion_angle;
        if let Some(&previous) = angles.last() {
            // unwrap onto the branch closest to the previous sample
            angle += ((previous - angle) / std::f64::consts::TAU).round() * std::f64::consts::TAU;
        }
        times.push(state.t);
        angles.push(angle);
    }
    if times.len() < 2 {
        return Ok(0.0);
    }
    let n = times.len() as f64;
    let mean_t = times.iter().sum::<f64>() / n;
    let mean_angle = angles.iter().sum::<f64>() / n;
    let sxx: f64 = times.iter().map(|t| (t - mean_t) * (t - mean_t)).sum();
    let sxy: f64 = times
        .iter()
        .zip(angles.iter())
        .map(|(t, a)| (t - mean_t) * (a - mean_angle))
        .sum();
    Ok(sxy / sxx)
}
