//! Domain replication: every worker holds the whole problem and transports
//! a strided share of each batch. Results do not depend on the worker count.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::result::RunResult;
use crate::transport::{run_with_workers, Problem};

pub fn run_replicated(config: &RunConfig, problem: &Problem, workers: u32) -> Result<RunResult> {
    run_with_workers(config, problem, workers)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub workers: u32,
    pub particles: u64,
    pub inactive_rate: Option<f64>,
    pub active_rate: Option<f64>,
    pub efficiency: f64,
}

impl ScalingRow {
    /// The rate efficiency is measured on: active when there are active
    /// batches, inactive otherwise.
    pub fn figure_of_merit(&self) -> Option<f64> {
        self.active_rate.or(self.inactive_rate)
    }
}

/// rate(W) / (W rate(1)).
pub fn scaling_efficiency(rate: f64, workers: u32, base_rate: f64) -> f64 {
    rate / (workers as f64 * base_rate)
}

/// Weak scaling: each run keeps `particles_per_worker` per worker.
pub fn weak_scaling_study(
    base: &RunConfig,
    problem: &Problem,
    worker_list: &[u32],
    particles_per_worker: u64,
) -> Result<Vec<ScalingRow>> {
    if worker_list.first() != Some(&1) || !worker_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Config(
            "worker list must be ascending and start at 1".into(),
        ));
    }
    if particles_per_worker == 0 {
        return Err(Error::Config(
            "particles per worker must be at least 1".into(),
        ));
    }
    let mut rows: Vec<ScalingRow> = Vec::with_capacity(worker_list.len());
    let mut base_rate = None;
    for &w in worker_list {
        let cfg = RunConfig {
            particles_per_batch: w as u64 * particles_per_worker,
            workers: w,
            ..base.clone()
        };
        let result = run_replicated(&cfg, problem, w)?;
        let mut row = ScalingRow {
            workers: w,
            particles: cfg.particles_per_batch,
            inactive_rate: result.inactive_rate(),
            active_rate: result.active_rate(),
            efficiency: 1.0,
        };
        let fom = row
            .figure_of_merit()
            .ok_or_else(|| Error::Statistics(format!("no measurable rate with {w} workers")))?;
        let base = *base_rate.get_or_insert(fom);
        row.efficiency = scaling_efficiency(fom, w, base);
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn efficiency_formula() {
        assert_eq!(scaling_efficiency(800.0, 4, 200.0), 1.0);
        assert_eq!(scaling_efficiency(100.0, 1, 100.0), 1.0);
        assert_eq!(scaling_efficiency(300.0, 4, 100.0), 0.75);
    }
}
