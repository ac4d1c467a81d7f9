//! Points and covectors on extended contact phase space.

use crate::error::StateError;

/// A point `(q, p, s, t)` in extended contact phase space.
///
/// `q` and `p` are position and momentum vectors of equal dimension `n`,
/// `s` is the action coordinate, and `t` is time, carried as an ordinary
/// coordinate so that time-advancing maps compose like any other map.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub s: f64,
    pub t: f64,
}

impl ContactState {
    /// Validated constructor: `q` and `p` must have equal nonzero length and
    /// every component must be finite.
    pub fn new(q: Vec<f64>, p: Vec<f64>, s: f64, t: f64) -> Result<Self, StateError> {
        if q.len() != p.len() {
            return Err(StateError::DimensionMismatch {
                q_dim: q.len(),
                p_dim: p.len(),
            });
        }
        if q.is_empty() {
            return Err(StateError::EmptyState);
        }
        let state = ContactState { q, p, s, t };
        if !state.is_finite() {
            return Err(StateError::NonFinite);
        }
        Ok(state)
    }

    /// One-degree-of-freedom state. Panics on non-finite input.
    pub fn scalar(q: f64, p: f64, s: f64, t: f64) -> Self {
        Self::new(vec![q], vec![p], s, t).expect("finite scalar state")
    }

    /// Planar (two-degree-of-freedom) state. Panics on non-finite input.
    pub fn planar(q: [f64; 2], p: [f64; 2], s: f64, t: f64) -> Self {
        Self::new(q.to_vec(), p.to_vec(), s, t).expect("finite planar state")
    }

    /// Dimension `n` of the configuration space.
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().all(|x| x.is_finite())
            && self.p.iter().all(|x| x.is_finite())
            && self.s.is_finite()
            && self.t.is_finite()
    }

    /// `|q|`, the configuration-space radius.
    pub fn radius(&self) -> f64 {
        self.q.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `|p|²`, twice the kinetic energy.
    pub fn momentum_norm_squared(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum::<f64>()
    }

    /// Max-norm over the autonomous coordinates `(q, p, s)`.
    pub fn autonomous_max_norm(&self) -> f64 {
        self.q
            .iter()
            .chain(self.p.iter())
            .chain(std::iter::once(&self.s))
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Flatten the autonomous coordinates into `(q₁..qₙ, p₁..pₙ, s)`.
    pub fn autonomous_coords(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.dim() + 1);
        v.extend_from_slice(&self.q);
        v.extend_from_slice(&self.p);
        v.push(self.s);
        v
    }

    /// Rebuild a state from flattened `(q, p, s)` coordinates and a time.
    ///
    /// Panics if `coords.len()` is not odd and at least 3.
    pub fn from_autonomous_coords(coords: &[f64], t: f64) -> Self {
        assert!(
            coords.len() >= 3 && coords.len() % 2 == 1,
            "autonomous coordinates must have odd length 2n+1, got {}",
            coords.len()
        );
        let n = (coords.len() - 1) / 2;
        ContactState {
            q: coords[..n].to_vec(),
            p: coords[n..2 * n].to_vec(),
            s: coords[2 * n],
            t,
        }
    }
}

/// Coefficients of a 1-form on contact phase space in the coordinate basis
/// `(dq₁..dqₙ, dp₁..dpₙ, ds)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactCovector {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
    pub ds: f64,
}

impl ContactCovector {
    /// Total dimension `2n + 1`.
    pub fn dim(&self) -> usize {
        self.dq.len() + self.dp.len() + 1
    }

    /// Flatten into `(dq-block, dp-block, ds)` order.
    pub fn flatten(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(&self.dq);
        v.extend_from_slice(&self.dp);
        v.push(self.ds);
        v
    }

    pub fn norm(&self) -> f64 {
        self.flatten().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// The contact form `η = ds − Σᵢ pᵢ dqᵢ` evaluated at a state: the dq-block
/// is `−p`, the dp-block vanishes, and the ds-coefficient is identically 1.
pub fn eta_at(state: &ContactState) -> ContactCovector {
    ContactCovector {
        dq: state.p.iter().map(|pi| -pi).collect(),
        dp: vec![0.0; state.dim()],
        ds: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_at_origin_of_momentum_space() {
        let eta = eta_at(&ContactState::scalar(2.0, 0.0, 1.0, 0.0));
        assert_eq!(eta.flatten(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn eta_substitutes_momentum() {
        let eta = eta_at(&ContactState::scalar(0.0, 3.0, 0.0, 0.0));
        assert_eq!(eta.flatten(), vec![-3.0, 0.0, 1.0]);
        assert_eq!(eta.dim(), 3);
    }

    #[test]
    fn eta_planar() {
        let eta = eta_at(&ContactState::planar([0.0, 0.0], [1.0, -2.0], 0.0, 0.0));
        assert_eq!(eta.flatten(), vec![-1.0, 2.0, 0.0, 0.0, 1.0]);
        assert_eq!(eta.dim(), 5);
    }

    #[test]
    fn new_rejects_dimension_mismatch() {
        let err = ContactState::new(vec![1.0], vec![1.0, 2.0], 0.0, 0.0).unwrap_err();
        assert_eq!(err, StateError::DimensionMismatch { q_dim: 1, p_dim: 2 });
    }

    #[test]
    fn new_rejects_empty_and_non_finite() {
        assert_eq!(
            ContactState::new(vec![], vec![], 0.0, 0.0).unwrap_err(),
            StateError::EmptyState
        );
        assert_eq!(
            ContactState::new(vec![f64::NAN], vec![0.0], 0.0, 0.0).unwrap_err(),
            StateError::NonFinite
        );
        assert_eq!(
            ContactState::new(vec![0.0], vec![0.0], f64::INFINITY, 0.0).unwrap_err(),
            StateError::NonFinite
        );
    }

    #[test]
    fn autonomous_coords_round_trip() {
        let state = ContactState::planar([1.0, 2.0], [3.0, 4.0], 5.0, 6.0);
        let coords = state.autonomous_coords();
        assert_eq!(coords, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let back = ContactState::from_autonomous_coords(&coords, 6.0);
        assert_eq!(back, state);
    }
}
