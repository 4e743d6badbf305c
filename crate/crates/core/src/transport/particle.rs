use crate::geometry::{CellId, Surface, Vec3};
use crate::prng::Stream;
use crate::tally::LogEntry;
use crate::xslib::{MacroXS, NuclidePartial};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fate {
    #[default]
    Captured,
    Fissioned,
}

/// A banked fission neutron.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FissionSite {
    pub parent_index: u64,
    pub site_ordinal: u32,
    pub position: Vec3,
    pub energy: f64,
    pub direction: Vec3,
}

impl FissionSite {
    pub fn canonical_key(&self) -> (u64, u32) {
        (self.parent_index, self.site_ordinal)
    }
}

/// Work counters carried by each history.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub lookups: u64,
    pub collisions: u64,
    pub crossings: u64,
    pub scored_tracks: u64,
    /// Cross-section evaluations in the scoring path: one per cached
    /// macroscopic read (fused) or one per nuclide re-walked (naive).
    pub scoring_xs_evals: u64,
    /// Nuclide evaluations repeated at collisions when no partials were kept.
    pub collision_xs_evals: u64,
}

impl OpCounters {
    pub fn add(&mut self, o: &OpCounters) {
        self.lookups += o.lookups;
        self.collisions += o.collisions;
        self.crossings += o.crossings;
        self.scored_tracks += o.scored_tracks;
        self.scoring_xs_evals += o.scoring_xs_evals;
        self.collision_xs_evals += o.collision_xs_evals;
    }
}

/// Optional per-history event trace used to compare executors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceEvent {
    Lookup { material: u32 },
    Flight { distance: f64 },
    Crossing { distance: f64, surface: Surface },
    Scatter { nuclide: u32 },
    Capture { nuclide: u32 },
    Fission { nuclide: u32, sites: u32 },
}

#[derive(Clone, Debug)]
pub struct Particle {
    pub global_index: u64,
    pub position: Vec3,
    pub direction: Vec3,
    pub energy: f64,
    /// Always 1 in this analog engine.
    pub weight: f64,
    pub cell: CellId,
    pub rng: Stream,
    pub alive: bool,
    /// Valid between a lookup and the advance/collision that consumes it.
    pub macro_xs: Option<MacroXS>,
    pub partials: Vec<NuclidePartial>,
    pub has_partials: bool,
    pub log: Vec<LogEntry>,
    pub sites: Vec<FissionSite>,
    pub fate: Option<Fate>,
    pub energy_clamps: u32,
    pub counters: OpCounters,
    pub trace: Option<Vec<TraceEvent>>,
}

impl Particle {
    pub fn invalidate_xs(&mut self) {
        self.macro_xs = None;
        self.has_partials = false;
    }

    pub(crate) fn trace(&mut self, ev: TraceEvent) {
        if let Some(t) = self.trace.as_mut() {
            t.push(ev);
        }
    }

    pub fn into_record(self) -> ParticleRecord {
        ParticleRecord {
            global_index: self.global_index,
            log: self.log,
            sites: self.sites,
            fate: self.fate.unwrap_or_default(),
            draws: self.rng.draws(),
            energy_clamps: self.energy_clamps,
            counters: self.counters,
            trace: self.trace,
        }
    }
}

/// What is left of a history once it has died.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParticleRecord {
    pub global_index: u64,
    pub log: Vec<LogEntry>,
    pub sites: Vec<FissionSite>,
    pub fate: Fate,
    pub draws: u64,
    pub energy_clamps: u32,
    pub counters: OpCounters,
    pub trace: Option<Vec<TraceEvent>>,
}
