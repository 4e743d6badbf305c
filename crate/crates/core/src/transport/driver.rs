use std::thread;
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::config::{Mode, RunConfig};
use crate::error::{Error, Result};
use crate::prng::batch_stream;
use crate::result::{BatchStats, KernelTimings, PhysicsOutput, RunResult};
use crate::tally::{finalize, reduce_batch, KeffSeries, TallyAccumulator, TallyLayout};

use super::particle::{Fate, FissionSite, OpCounters, ParticleRecord};
use super::source::resample_fission_bank;
use super::{check_config, transport_set, BatchContext, Problem, SetOutput};

/// Runs with the mode and worker count named in `config`.
pub fn run(config: &RunConfig, problem: &Problem) -> Result<RunResult> {
    run_with_workers(config, problem, config.workers)
}

/// History-based execution on a single worker.
pub fn run_history(config: &RunConfig, problem: &Problem) -> Result<RunResult> {
    let cfg = RunConfig {
        mode: Mode::History,
        workers: 1,
        ..config.clone()
    };
    run_with_workers(&cfg, problem, 1)
}

/// Event-based execution on a single worker.
pub fn run_event(config: &RunConfig, problem: &Problem) -> Result<RunResult> {
    let cfg = RunConfig {
        mode: Mode::Event,
        workers: 1,
        ..config.clone()
    };
    run_with_workers(&cfg, problem, 1)
}

/// Power iteration with particles dealt to `workers` replicas by
/// `global_index mod workers`. Every batch ends with a barrier where the
/// coordinator merges logs and fission sites in canonical order, reduces
/// and resamples.
pub fn run_with_workers(config: &RunConfig, problem: &Problem, workers: u32) -> Result<RunResult> {
    check_config(config, problem)?;
    if workers == 0 || workers as u64 > config.particles_per_batch {
        return Err(Error::Config(format!(
            "{workers} workers for {} particles per batch",
            config.particles_per_batch
        )));
    }
    let n = config.particles_per_batch;
    let source_weight = n as f64;
    let layout = TallyLayout::new(&problem.geometry);
    let subsets: Vec<Vec<u64>> = (0..workers as u64)
        .map(|w| (w..n).step_by(workers as usize).collect())
        .collect();

    let mut acc = TallyAccumulator::new(layout.n_bins());
    let mut keff = Vec::with_capacity(config.total_batches() as usize);
    let mut batches = Vec::with_capacity(config.total_batches() as usize);
    let mut bank_hash = Sha256::new();
    let mut timings = KernelTimings::default();
    let mut counters = OpCounters::default();
    let mut max_live = 0u64;
    let mut max_draws = 0u64;
    let mut inactive_seconds = 0.0;
    let mut active_seconds = 0.0;

    let mut source: Option<Vec<FissionSite>> = None;
    let mut k_run = 1.0;

    for batch in 0..config.total_batches() {
        let t_batch = Instant::now();
        let ctx = BatchContext::new(problem, config, batch, k_run, source.as_deref())?;
        let active = ctx.active;

        let outputs: Vec<SetOutput> = if workers == 1 {
            vec![transport_set(&ctx, &subsets[0])?]
        } else {
            thread::scope(|s| {
                let handles: Vec<_> = subsets
                    .iter()
                    .map(|subset| {
                        let ctx = &ctx;
                        s.spawn(move || transport_set(ctx, subset))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker thread panicked"))
                    .collect::<Result<Vec<_>>>()
            })?
        };
        for out in &outputs {
            timings.add(&out.timings);
            max_live = max_live.max(out.max_live);
        }

        let t_reduce = Instant::now();
        let groups: Vec<&[ParticleRecord]> = outputs.iter().map(|o| o.records.as_slice()).collect();
        let sum = reduce_batch(&groups, layout.n_bins(), config.reduction);
        timings.reduce += t_reduce.elapsed().as_secs_f64();

        let t_merge = Instant::now();
        let mut ordered: Vec<&ParticleRecord> = groups.iter().flat_map(|g| g.iter()).collect();
        ordered.sort_by_key(|r| r.global_index);
        if ordered.len() as u64 != n
            || ordered
                .iter()
                .enumerate()
                .any(|(i, r)| r.global_index != i as u64)
        {
            return Err(Error::Logic(format!(
                "batch {batch}: histories lost or duplicated"
            )));
        }
        let mut stats = BatchStats {
            sourced: n,
            ..BatchStats::default()
        };
        let mut bank: Vec<FissionSite> = Vec::with_capacity(n as usize + n as usize / 4);
        for r in &ordered {
            match r.fate {
                Fate::Captured => stats.captures += 1,
                Fate::Fissioned => stats.fissions += 1,
            }
            stats.energy_clamps += r.energy_clamps as u64;
            max_draws = max_draws.max(r.draws);
            counters.add(&r.counters);
            bank.extend_from_slice(&r.sites);
        }
        stats.sites_banked = bank.len() as u64;
        if stats.captures + stats.fissions != stats.sourced {
            return Err(Error::Logic(format!(
                "batch {batch}: neutron bookkeeping does not balance"
            )));
        }
        hash_bank(&mut bank_hash, &bank);
        drop(ordered);
        drop(groups);
        drop(outputs);

        let k_batch = sum.keff / source_weight;
        keff.push(k_batch);
        batches.push(stats);
        if active {
            acc.record_active(&sum, source_weight);
        }

        if batch + 1 < config.total_batches() {
            if !(k_batch > 0.0) {
                return Err(Error::PopulationCollapse { batch });
            }
            let u = batch_stream(config.seed, batch as u64).next_uniform();
            source = Some(resample_fission_bank(&bank, n as usize, u, batch)?);
            k_run = k_batch;
        }
        timings.merge += t_merge.elapsed().as_secs_f64();

        let elapsed = t_batch.elapsed().as_secs_f64();
        if active {
            active_seconds += elapsed;
        } else {
            inactive_seconds += elapsed;
        }
    }

    let tallies = if config.active_batches >= 2 {
        Some(finalize(&acc, &layout, &problem.geometry)?)
    } else {
        None
    };
    Ok(RunResult {
        config: config.clone(),
        workers,
        library_hash: problem.library_hash().to_string(),
        geometry_hash: problem.geometry_hash(),
        physics: PhysicsOutput {
            keff: KeffSeries::finalize(keff, config.inactive_batches),
            tallies,
            batches,
            bank_digest: bank_hash
                .finalize()
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect(),
            max_history_draws: max_draws,
        },
        timings,
        inactive_seconds,
        active_seconds,
        counters,
        max_live,
    })
}

fn hash_bank(h: &mut Sha256, bank: &[FissionSite]) {
    h.update((bank.len() as u64).to_le_bytes());
    for s in bank {
        h.update(s.parent_index.to_le_bytes());
        h.update(s.site_ordinal.to_le_bytes());
        for v in [
            s.position.x,
            s.position.y,
            s.position.z,
            s.energy,
            s.direction.x,
            s.direction.y,
            s.direction.z,
        ] {
            h.update(v.to_bits().to_le_bytes());
        }
    }
}
