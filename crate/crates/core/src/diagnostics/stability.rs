//! Step-size stability scans.

use crate::integrators::{integrate, StepMethod};
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// Outcome of scanning one method across a step-size grid.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub method: StepMethod,
    pub tau_grid: Vec<f64>,
    /// Per-grid-point classification: completed with every sampled state
    /// inside the bound.
    pub stable: Vec<bool>,
    /// Largest grid step classified stable; `None` if none is.
    pub max_stable_tau: Option<f64>,
}

/// Run every method at every step size in `tau_grid` from `state0` to
/// `t_end`, classifying a run as stable when it completes and every sampled
/// state satisfies `‖(q, p, s)‖∞ ≤ bound`.
///
/// Near an unstable equilibrium stability need not be monotone in the step
/// size: isolated stable windows at large τ are genuine, so the report
/// keeps the whole per-τ classification next to the summary value.
pub fn stability_scan<M: SeparableContactModel + ?Sized>(
    model: &M,
    methods: &[StepMethod],
    state0: &ContactState,
    tau_grid: &[f64],
    t_end: f64,
    bound: f64,
) -> Vec<StabilityReport> {
    assert!(bound > 0.0, "bound must be positive");
    methods
        .iter()
        .map(|&method| {
            let stable: Vec<bool> = tau_grid
                .iter()
                .map(|&tau| {
                    let run = integrate(model, method, state0, tau, t_end, 1);
                    run.status.is_completed()
                        && run.samples.iter().all(|s| s.autonomous_max_norm() <= bound)
                })
                .collect();
            let max_stable_tau = tau_grid
                .iter()
                .zip(stable.iter())
                .filter(|(_, &ok)| ok)
                .map(|(&tau, _)| tau)
                .fold(None, |acc: Option<f64>, tau| {
                    Some(acc.map_or(tau, |best| best.max(tau)))
                });
            StabilityReport {
                method,
                tau_grid: tau_grid.to_vec(),
                stable,
                max_stable_tau,
            }
        })
        .collect()
}
