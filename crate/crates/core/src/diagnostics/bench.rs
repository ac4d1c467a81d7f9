//! Wall-clock and evaluation-count comparison across methods.

use std::time::Instant;

use crate::diagnostics::CounterSnapshot;
use crate::integrators::{integrate, RunStatus, StepMethod};
use crate::models::SeparableContactModel;
use crate::state::ContactState;

/// Timing and cost summary for one method.
#[derive(Debug, Clone)]
pub struct BenchmarkRow {
    pub method: StepMethod,
    /// Mean wall time over the repeats, seconds.
    pub mean_seconds: f64,
    /// Sample standard deviation over the repeats, seconds (0 for a single
    /// repeat).
    pub std_seconds: f64,
    /// Counters of one representative run (identical across repeats).
    pub counters: CounterSnapshot,
    pub steps: u64,
    pub status: RunStatus,
}

/// Run every method `repeats` times over `[state0.t, t_end]` at step `tau`
/// and report wall-clock mean ± sample standard deviation plus evaluation
/// counters. Runs execute serially so timings do not contend; timings are
/// hardware-dependent and for reporting only — the counters are the
/// machine-independent cost measure.
pub fn benchmark<M: SeparableContactModel + ?Sized>(
    model: &M,
    methods: &[StepMethod],
    state0: &ContactState,
    tau: f64,
    t_end: f64,
    repeats: usize,
) -> Vec<BenchmarkRow> {
    assert!(repeats >= 1, "need at least one repeat");
    methods
        .iter()
        .map(|&method| {
            let mut times = Vec::with_capacity(repeats);
            let mut last = None;
            for _ in 0..repeats {
                let clock = Instant::now();
                let run = integrate(model, method, state0, tau, t_end, usize::MAX);
                times.push(clock.elapsed().as_secs_f64());
                last = Some(run);
            }
            let run = last.expect("at least one repeat");
            let mean = times.iter().sum::<f64>() / times.len() as f64;
            let variance = if times.len() > 1 {
                times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>()
                    / (times.len() - 1) as f64
            } else {
                0.0
            };
            BenchmarkRow {
                method,
                mean_seconds: mean,
                std_seconds: variance.sqrt(),
                counters: run.counters,
                steps: run.steps_taken,
                status: run.status,
            }
        })
        .collect()
}
