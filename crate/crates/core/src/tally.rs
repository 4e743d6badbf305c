//! Track-length tallies, schedule-independent batch reduction and batch
//! statistics.
//!
//! Particles never touch shared accumulators while they fly. Every score is
//! appended to the particle's own contribution log; a single coordinator
//! replays the logs afterwards. In deterministic mode the replay order is
//! ascending global particle index and emission order within a log, so the
//! floating-point sums do not depend on how histories were scheduled.

use std::fmt;

use crate::config::{Reduction, TallyMode};
use crate::error::{Error, Result};
use crate::geometry::{CellId, Pincell};
use crate::transport::{BatchContext, Particle, ParticleRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Score {
    Flux,
    TotalRate,
    AbsorptionRate,
    FissionRate,
    NuFissionRate,
}

impl Score {
    pub const ALL: [Score; 5] = [
        Score::Flux,
        Score::TotalRate,
        Score::AbsorptionRate,
        Score::FissionRate,
        Score::NuFissionRate,
    ];
    pub const COUNT: usize = 5;
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Score::Flux => "flux",
            Score::TotalRate => "total_rate",
            Score::AbsorptionRate => "absorption_rate",
            Score::FissionRate => "fission_rate",
            Score::NuFissionRate => "nu_fission_rate",
        })
    }
}

/// Log bin reserved for the collision estimate of k.
pub const KEFF_BIN: u32 = u32::MAX;
/// A history emitting more log entries than this is aborted.
pub const MAX_LOG_ENTRIES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogEntry {
    pub bin: u32,
    pub value: f64,
}

/// Dense `(region, score)` index space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TallyLayout {
    n_regions: usize,
}

impl TallyLayout {
    pub fn new(geometry: &Pincell) -> Self {
        TallyLayout {
            n_regions: geometry.n_regions(),
        }
    }

    pub fn n_bins(&self) -> usize {
        self.n_regions * Score::COUNT
    }

    pub fn bin(&self, region: usize, score: Score) -> u32 {
        (region * Score::COUNT + score as usize) as u32
    }

    pub fn split(&self, bin: usize) -> (usize, Score) {
        (bin / Score::COUNT, Score::ALL[bin % Score::COUNT])
    }
}

/// Scores a track of `length` cm in the particle's current cell.
///
/// Fused mode reads the macroscopic sums cached by the lookup kernel. Naive
/// mode re-walks the material's nuclides to rebuild them, with the same
/// arithmetic in the same order, so both produce identical bits.
pub fn score_track(p: &mut Particle, length: f64, ctx: &BatchContext<'_>) -> Result<()> {
    let cached = p.macro_xs.ok_or_else(|| {
        Error::Logic(format!(
            "particle {} scored without cross sections",
            p.global_index
        ))
    })?;
    let material = ctx.problem.geometry.material_of(p.cell);
    let xs = match ctx.config.tally_mode {
        TallyMode::Fused => {
            p.counters.scoring_xs_evals += 1;
            cached
        }
        TallyMode::Naive => {
            let composition = ctx.problem.library.material(material)?.composition.len();
            p.counters.scoring_xs_evals += composition as u64;
            ctx.tables.macro_xs(material, p.energy, None)?
        }
    };
    p.counters.scored_tracks += 1;
    let region = ctx.problem.geometry.region_index(p.cell);
    let wl = p.weight * length;
    let values = [
        wl,
        wl * xs.total,
        wl * xs.absorption(),
        wl * xs.fission,
        wl * xs.nu_fission,
    ];
    for (score, value) in Score::ALL.into_iter().zip(values) {
        if value != 0.0 {
            p.log.push(LogEntry {
                bin: ctx.layout.bin(region, score),
                value,
            });
        }
    }
    Ok(())
}

/// Summed contributions of one batch.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchSum {
    pub bins: Vec<f64>,
    pub keff: f64,
}

impl BatchSum {
    pub fn zeros(n_bins: usize) -> Self {
        BatchSum {
            bins: vec![0.0; n_bins],
            keff: 0.0,
        }
    }

    fn replay(&mut self, log: &[LogEntry]) {
        for e in log {
            if e.bin == KEFF_BIN {
                self.keff += e.value;
            } else {
                self.bins[e.bin as usize] += e.value;
            }
        }
    }

    fn add(&mut self, other: &BatchSum) {
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.keff += other.keff;
    }
}

/// Reduces the logs of a batch.
///
/// `groups` holds one slice of records per worker, each in the order that
/// worker finished them. Deterministic mode ignores the grouping and replays
/// in ascending global index; fast mode sums each group in completion order
/// and then adds the group sums in worker order.
pub fn reduce_batch(groups: &[&[ParticleRecord]], n_bins: usize, order: Reduction) -> BatchSum {
    match order {
        Reduction::Deterministic => {
            let mut all: Vec<&ParticleRecord> = groups.iter().flat_map(|g| g.iter()).collect();
            all.sort_by_key(|r| r.global_index);
            let mut sum = BatchSum::zeros(n_bins);
            for r in all {
                sum.replay(&r.log);
            }
            sum
        }
        Reduction::Fast => {
            let mut total = BatchSum::zeros(n_bins);
            for group in groups {
                let mut partial = BatchSum::zeros(n_bins);
                for r in group.iter() {
                    partial.replay(&r.log);
                }
                total.add(&partial);
            }
            total
        }
    }
}

/// Mean and standard error of the mean from running sums.
pub fn batch_statistics(sum: f64, sum_sq: f64, n: u32) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::Statistics(format!(
            "{n} active batches; need at least 2"
        )));
    }
    let b = n as f64;
    let mean = sum / b;
    let var = (sum_sq / b - mean * mean) / (b - 1.0);
    Ok((mean, var.max(0.0).sqrt()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TallyAccumulator {
    pub batch_sum: Vec<f64>,
    pub accum_sum: Vec<f64>,
    pub accum_sumsq: Vec<f64>,
    pub n_active_recorded: u32,
}

impl TallyAccumulator {
    pub fn new(n_bins: usize) -> Self {
        TallyAccumulator {
            batch_sum: vec![0.0; n_bins],
            accum_sum: vec![0.0; n_bins],
            accum_sumsq: vec![0.0; n_bins],
            n_active_recorded: 0,
        }
    }

    /// Folds an active batch into the running sums.
    pub fn record_active(&mut self, batch: &BatchSum, source_weight: f64) {
        self.batch_sum.copy_from_slice(&batch.bins);
        for ((s, sq), x) in self
            .accum_sum
            .iter_mut()
            .zip(&mut self.accum_sumsq)
            .zip(&self.batch_sum)
        {
            let x = x / source_weight;
            *s += x;
            *sq += x * x;
        }
        self.n_active_recorded += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TallyRow {
    pub region: CellId,
    pub score: Score,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TallyTable {
    pub rows: Vec<TallyRow>,
}

impl TallyTable {
    pub fn get(&self, region: CellId, score: Score) -> Option<&TallyRow> {
        self.rows
            .iter()
            .find(|r| r.region == region && r.score == score)
    }
}

/// Per-batch k values with active-batch statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct KeffSeries {
    pub values: Vec<f64>,
    pub inactive_batches: u32,
    /// `(mean, stderr)` over active batches, when at least two exist.
    pub stats: Option<(f64, f64)>,
}

impl KeffSeries {
    pub fn active(&self) -> &[f64] {
        &self.values[self.inactive_batches as usize..]
    }

    pub fn finalize(values: Vec<f64>, inactive_batches: u32) -> Self {
        let active = &values[inactive_batches as usize..];
        let sum: f64 = active.iter().sum();
        let sum_sq: f64 = active.iter().map(|k| k * k).sum();
        let stats = batch_statistics(sum, sum_sq, active.len() as u32).ok();
        KeffSeries {
            values,
            inactive_batches,
            stats,
        }
    }
}

/// Per-bin mean and standard error; batch sums are normalized by the
/// source weight of a batch. The source weight is applied as the batches
/// are recorded (see [`TallyAccumulator::record_active`]).
pub fn finalize(
    acc: &TallyAccumulator,
    layout: &TallyLayout,
    geometry: &Pincell,
) -> Result<TallyTable> {
    let rows = (0..layout.n_bins())
        .map(|bin| {
            let (region, score) = layout.split(bin);
            let (mean, stderr) = batch_statistics(
                acc.accum_sum[bin],
                acc.accum_sumsq[bin],
                acc.n_active_recorded,
            )?;
            Ok(TallyRow {
                region: geometry.region_cell(region),
                score,
                mean,
                stderr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TallyTable { rows })
}
