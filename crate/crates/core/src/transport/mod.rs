//! Particle transport: the per-particle kernels, both executors, source
//! sampling and the power iteration that ties batches together.

mod driver;
mod event;
mod history;
mod kernels;
mod particle;
mod physics;
mod source;

pub use driver::{run, run_event, run_history, run_with_workers};
pub use event::{sort_lookup_queue, sort_queue_by_key, EventQueues};
pub use kernels::{
    advance_event, check_history, collision_event, xs_lookup_event, BatchContext, Route,
};
pub use particle::{Fate, FissionSite, OpCounters, Particle, ParticleRecord, TraceEvent};
pub use physics::{
    clamp_energy, collision_distance_from, fission_energy_from, isotropic_from,
    sample_collision_distance, sample_isotropic, scatter_energy_from,
};
pub use source::{resample_fission_bank, resample_indices, sample_source};

use crate::config::{Mode, RunConfig};
use crate::error::{Error, Result};
use crate::geometry::Pincell;
use crate::result::KernelTimings;
use crate::xslib::{
    build_unionized_index, hex_digest, library_fingerprint, Accel, Library, UnionizedIndex,
    XsTables,
};

/// Library, geometry and (optionally) the unionized index, shared read-only
/// by every worker.
#[derive(Clone, Debug)]
pub struct Problem {
    pub library: Library,
    pub geometry: Pincell,
    pub index: Option<UnionizedIndex>,
    library_hash: String,
}

impl Problem {
    pub fn new(library: Library, geometry: Pincell) -> Result<Self> {
        let n = library.materials.len() as u32;
        let bad = geometry
            .fuel_material_ids
            .iter()
            .chain(std::iter::once(&geometry.moderator_material_id))
            .find(|&&m| m >= n);
        if let Some(m) = bad {
            return Err(Error::Config(format!(
                "geometry uses material {m}; library has {n}"
            )));
        }
        let library_hash = library_fingerprint(&library);
        Ok(Problem {
            library,
            geometry,
            index: None,
            library_hash,
        })
    }

    /// Builds the unionized index if it does not exist yet.
    pub fn with_index(mut self) -> Self {
        self.ensure_index();
        self
    }

    pub fn ensure_index(&mut self) {
        if self.index.is_none() {
            self.index = Some(build_unionized_index(&self.library));
        }
    }

    pub fn tables(&self, accel: Accel) -> Result<XsTables<'_>> {
        XsTables::new(&self.library, accel, self.index.as_ref())
    }

    pub fn library_hash(&self) -> &str {
        &self.library_hash
    }

    pub fn geometry_hash(&self) -> String {
        let g = &self.geometry;
        let mut bytes = Vec::new();
        for v in [g.fuel_radius, g.pitch, g.height] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        bytes.extend_from_slice(&g.n_axial.to_le_bytes());
        for m in &g.fuel_material_ids {
            bytes.extend_from_slice(&m.to_le_bytes());
        }
        bytes.extend_from_slice(&g.moderator_material_id.to_le_bytes());
        hex_digest(&bytes)
    }
}

/// Output of one executor over a set of source indices.
#[derive(Debug, Default)]
pub(crate) struct SetOutput {
    /// In completion order.
    pub records: Vec<ParticleRecord>,
    pub timings: KernelTimings,
    pub max_live: u64,
}

/// Transports the given source indices with the executor named by the
/// context's config. Records come back in completion order.
pub fn transport_batch(ctx: &BatchContext<'_>, indices: &[u64]) -> Result<Vec<ParticleRecord>> {
    Ok(transport_set(ctx, indices)?.records)
}

pub(crate) fn transport_set(ctx: &BatchContext<'_>, indices: &[u64]) -> Result<SetOutput> {
    match ctx.config.mode {
        Mode::History => history::transport(ctx, indices),
        Mode::Event => event::transport(ctx, indices),
    }
}

pub(crate) fn check_config(config: &RunConfig, problem: &Problem) -> Result<()> {
    config.validate()?;
    if config.accel != Accel::Binary && problem.index.is_none() {
        return Err(Error::Config(format!(
            "lookup backend {} needs the unionized index; build it with Problem::with_index",
            config.accel
        )));
    }
    Ok(())
}
