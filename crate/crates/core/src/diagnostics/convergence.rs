//! Convergence-order estimation by step refinement.

use crate::diagnostics::DiagnosticsError;
use crate::integrators::{integrate, StepMethod};
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// The exact solution a refinement study measures errors against.
pub enum Reference<'a> {
    /// Closed-form `(q, p)` at a given time; errors are measured on `(q, p)`.
    Analytic(&'a dyn Fn(f64) -> (Vec<f64>, Vec<f64>)),
    /// A fine trajectory computed with `method` at step `tau_ref`; errors
    /// are measured on `(q, p, s)`. `tau_ref` must be at most one twentieth
    /// of the smallest step in the study.
    Fine { method: StepMethod, tau_ref: f64 },
}

/// Result of a step-refinement study.
#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub taus: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log(error)` against `log(tau)`.
    pub slope: f64,
}

/// Measure the global convergence order of `method` on `model` by
/// integrating to `t_end` at each step size in `tau_list` (which must hold
/// at least three decreasing values) and fitting the final-state error
/// against the reference.
pub fn convergence_order<M: SeparableContactModel + ?Sized>(
    model: &M,
    method: StepMethod,
    state0: &ContactState,
    t_end: f64,
    tau_list: &[f64],
    reference: Reference<'_>,
) -> Result<ConvergenceStudy, DiagnosticsError> {
    if tau_list.len() < 3 {
        return Err(DiagnosticsError::InvalidInput {
            reason: format!("need at least 3 step sizes, got {}", tau_list.len()),
        });
    }
    if tau_list.windows(2).any(|w| w[1] >= w[0]) || tau_list.iter().any(|&t| t <= 0.0) {
        return Err(DiagnosticsError::InvalidInput {
            reason: "step sizes must be positive and strictly decreasing".to_string(),
        });
    }

    let reference_state = match reference {
        Reference::Analytic(_) => None,
        Reference::Fine { method, tau_ref } => {
            let tau_min = *tau_list.last().expect("non-empty");
            if tau_ref > tau_min / 20.0 {
                return Err(DiagnosticsError::ReferenceUnavailable {
                    reason: format!(
                        "reference step {tau_ref} exceeds min(tau)/20 = {}",
                        tau_min / 20.0
                    ),
                });
            }
            let fine = integrate(model, method, state0, tau_ref, t_end, usize::MAX);
            if !fine.status.is_completed() {
                return Err(DiagnosticsError::ReferenceUnavailable {
                    reason: format!("reference run failed: {}", fine.status),
                });
            }
            Some(fine.last().clone())
        }
    };

    let mut errors = Vec::with_capacity(tau_list.len());
    for &tau in tau_list {
        let run = integrate(model, method, state0, tau, t_end, usize::MAX);
        if !run.status.is_completed() {
            return Err(DiagnosticsError::ReferenceUnavailable {
                reason: format!("run at tau={tau} failed: {}", run.status),
            });
        }
        let last = run.last();
        let error = match (&reference, &reference_state) {
            (Reference::Analytic(exact), _) => {
                let (q_ref, p_ref) = exact(last.t);
                phase_error(&last.q, &last.p, &q_ref, &p_ref, None, None)
            }
            (Reference::Fine { .. }, Some(fine)) => phase_error(
                &last.q,
                &last.p,
                &fine.q,
                &fine.p,
                Some(last.s),
                Some(fine.s),
            ),
            (Reference::Fine { .. }, None) => unreachable!("fine reference precomputed"),
        };
        errors.push(error);
    }

    let slope = log_log_slope(tau_list, &errors)?;
    Ok(ConvergenceStudy {
        taus: tau_list.to_vec(),
        errors,
        slope,
    })
}

fn phase_error(
    q: &[f64],
    p: &[f64],
    q_ref: &[f64],
    p_ref: &[f64],
    s: Option<f64>,
    s_ref: Option<f64>,
) -> f64 {
    let mut sum = 0.0;
    for (a, b) in q.iter().zip(q_ref.iter()).chain(p.iter().zip(p_ref.iter())) {
        sum += (a - b) * (a - b);
    }
    if let (Some(s), Some(s_ref)) = (s, s_ref) {
        sum += (s - s_ref) * (s - s_ref);
    }
    sum.sqrt()
}

fn log_log_slope(taus: &[f64], errors: &[f64]) -> Result<f64, DiagnosticsError> {
    if errors.iter().any(|&e| e <= 0.0) {
        return Err(DiagnosticsError::ReferenceUnavailable {
            reason: "zero error encountered; refine the reference".to_string(),
        });
    }
    let n = taus.len() as f64;
    let xs: Vec<f64> = taus.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{damped_oscillator_exact, LinearDampedOscillator};

    #[test]
    fn rejects_short_or_unsorted_grids() {
        let model = LinearDampedOscillator::new(1.0, 0.2);
        let start = ContactState::scalar(1.0, 0.0, 0.0, 0.0);
        let exact = |t: f64| {
            let (q, p) = damped_oscillator_exact(1.0, 0.0, 1.0, 0.2, t).unwrap();
            (vec![q], vec![p])
        };
        let short = convergence_order(
            &model,
            StepMethod::chi2(),
            &start,
            10.0,
            &[0.2, 0.1],
            Reference::Analytic(&exact),
        );
        assert!(matches!(short, Err(DiagnosticsError::InvalidInput { .. })));

        let unsorted = convergence_order(
            &model,
            StepMethod::chi2(),
            &start,
            10.0,
            &[0.1, 0.2, 0.05],
            Reference::Analytic(&exact),
        );
        assert!(matches!(
            unsorted,
            Err(DiagnosticsError::InvalidInput { .. })
        ));
    }

    #[test]
    fn rejects_too_coarse_fine_reference() {
        let model = LinearDampedOscillator::new(1.0, 0.2);
        let start = ContactState::scalar(1.0, 0.0, 0.0, 0.0);
        let result = convergence_order(
            &model,
            StepMethod::chi2(),
            &start,
            10.0,
            &[0.2, 0.1, 0.05],
            Reference::Fine {
                method: StepMethod::chi2(),
                tau_ref: 0.01,
            },
        );
        assert!(matches!(
            result,
            Err(DiagnosticsError::ReferenceUnavailable { .. })
        ));
    }
}
