use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::tally::{KeffSeries, TallyTable};
use crate::transport::OpCounters;

/// Wall time spent per kernel, in seconds, summed over workers.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KernelTimings {
    pub lookup: f64,
    pub advance: f64,
    pub collision: f64,
    pub sort: f64,
    pub reduce: f64,
    /// Gathering records and fission sites into canonical order.
    pub merge: f64,
}

impl KernelTimings {
    pub fn add(&mut self, o: &KernelTimings) {
        self.lookup += o.lookup;
        self.advance += o.advance;
        self.collision += o.collision;
        self.sort += o.sort;
        self.reduce += o.reduce;
        self.merge += o.merge;
    }

    pub fn rows(&self) -> [(&'static str, f64); 6] {
        [
            ("lookup", self.lookup),
            ("advance", self.advance),
            ("collision", self.collision),
            ("sort", self.sort),
            ("reduce", self.reduce),
            ("merge", self.merge),
        ]
    }
}

/// Neutron bookkeeping for one batch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchStats {
    pub sourced: u64,
    pub captures: u64,
    pub fissions: u64,
    pub sites_banked: u64,
    pub energy_clamps: u64,
}

/// Everything a run computes, excluding timings. Two runs that should agree
/// bit for bit are compared through [`PhysicsOutput::digest`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicsOutput {
    pub keff: KeffSeries,
    pub tallies: Option<TallyTable>,
    pub batches: Vec<BatchStats>,
    /// Running SHA-256 over every batch's canonical fission bank.
    pub bank_digest: String,
    pub max_history_draws: u64,
}

impl PhysicsOutput {
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for k in &self.keff.values {
            h.update(k.to_bits().to_le_bytes());
        }
        if let Some((m, s)) = self.keff.stats {
            h.update(m.to_bits().to_le_bytes());
            h.update(s.to_bits().to_le_bytes());
        }
        if let Some(t) = &self.tallies {
            for row in &t.rows {
                h.update(row.mean.to_bits().to_le_bytes());
                h.update(row.stderr.to_bits().to_le_bytes());
            }
        }
        for b in &self.batches {
            for v in [
                b.sourced,
                b.captures,
                b.fissions,
                b.sites_banked,
                b.energy_clamps,
            ] {
                h.update(v.to_le_bytes());
            }
        }
        h.update(self.bank_digest.as_bytes());
        h.update(self.max_history_draws.to_le_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub config: RunConfig,
    pub workers: u32,
    pub library_hash: String,
    pub geometry_hash: String,
    pub physics: PhysicsOutput,
    pub timings: KernelTimings,
    pub inactive_seconds: f64,
    pub active_seconds: f64,
    pub counters: OpCounters,
    /// Largest number of simultaneously live particles in any worker.
    pub max_live: u64,
}

impl RunResult {
    /// Particles per second over the inactive batches.
    pub fn inactive_rate(&self) -> Option<f64> {
        rate(
            self.config.inactive_batches,
            self.config.particles_per_batch,
            self.inactive_seconds,
        )
    }

    /// Particles per second over the active batches.
    pub fn active_rate(&self) -> Option<f64> {
        rate(
            self.config.active_batches,
            self.config.particles_per_batch,
            self.active_seconds,
        )
    }
}

fn rate(batches: u32, particles: u64, seconds: f64) -> Option<f64> {
    (batches > 0 && seconds > 0.0).then(|| (batches as f64 * particles as f64) / seconds)
}
