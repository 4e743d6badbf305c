//! The three event kernels. Each acts on one particle and touches nothing
//! but that particle and read-only problem data, so any interleaving of
//! particles produces the same per-particle results.

use crate::config::{RunConfig, TallyMode};
use crate::error::{Error, Result};
use crate::geometry::{apply_boundary, Pincell, Surface, NUDGE};
use crate::tally::{score_track, LogEntry, TallyLayout, KEFF_BIN, MAX_LOG_ENTRIES};
use crate::xslib::XsTables;

use super::particle::{Fate, FissionSite, Particle, TraceEvent};
use super::physics::{
    fission_energy_from, sample_collision_distance, sample_isotropic, scatter_energy_from,
};
use super::Problem;

/// Read-only state shared by every history of one batch.
#[derive(Clone, Copy, Debug)]
pub struct BatchContext<'a> {
    pub problem: &'a Problem,
    pub tables: XsTables<'a>,
    pub config: &'a RunConfig,
    pub layout: TallyLayout,
    pub batch: u32,
    /// Tallies are scored only in active batches.
    pub active: bool,
    /// Previous batch's k, used to normalize fission yield.
    pub k_run: f64,
    /// Resampled bank; `None` for the initial batch.
    pub source: Option<&'a [FissionSite]>,
    pub trace: bool,
}

impl<'a> BatchContext<'a> {
    pub fn new(
        problem: &'a Problem,
        config: &'a RunConfig,
        batch: u32,
        k_run: f64,
        source: Option<&'a [FissionSite]>,
    ) -> Result<Self> {
        Ok(BatchContext {
            problem,
            tables: problem.tables(config.accel)?,
            config,
            layout: TallyLayout::new(&problem.geometry),
            batch,
            active: batch >= config.inactive_batches,
            k_run,
            source,
            trace: false,
        })
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }
}

/// Where a particle goes after a kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Lookup,
    Advance,
    Collision,
    Dead,
}

/// Cross-section lookup kernel.
pub fn xs_lookup_event(p: &mut Particle, ctx: &BatchContext<'_>) -> Result<Route> {
    let material = ctx.problem.geometry.material_of(p.cell);
    let keep = ctx.config.tally_mode == TallyMode::Fused;
    let partials = keep.then_some(&mut p.partials);
    let xs = ctx.tables.macro_xs(material, p.energy, partials)?;
    p.macro_xs = Some(xs);
    p.has_partials = keep;
    p.counters.lookups += 1;
    p.trace(TraceEvent::Lookup { material });
    Ok(Route::Advance)
}

/// Ray-trace kernel: fly to the next collision or surface.
pub fn advance_event(p: &mut Particle, ctx: &BatchContext<'_>) -> Result<Route> {
    let xs = p.macro_xs.ok_or_else(|| {
        Error::Logic(format!(
            "particle {} advanced without cross sections",
            p.global_index
        ))
    })?;
    let geom = &ctx.problem.geometry;
    let d_coll = sample_collision_distance(xs.total, &mut p.rng)?;
    let hit = geom.distance_to_boundary(p.position, p.direction, p.cell)?;

    if d_coll < hit.distance {
        if ctx.active {
            score_track(p, d_coll, ctx)?;
        }
        p.position = p.position + p.direction * d_coll;
        p.trace(TraceEvent::Flight { distance: d_coll });
        return Ok(Route::Collision);
    }

    if ctx.active {
        score_track(p, hit.distance, ctx)?;
    }
    p.position = p.position + p.direction * hit.distance;
    p.trace(TraceEvent::Crossing {
        distance: hit.distance,
        surface: hit.surface,
    });
    if hit.surface.is_outer() {
        reflect(p, geom, hit.surface)?;
        // a corner hit leaves the particle heading out through a second plane
        for s in geom.outgoing_outer_planes(p.position, p.direction) {
            reflect(p, geom, s)?;
        }
    }
    p.position = geom.snap_to_box(p.position + p.direction * NUDGE);
    p.cell = geom.locate(p.position)?;
    p.invalidate_xs();
    p.counters.crossings += 1;
    Ok(Route::Lookup)
}

fn reflect(p: &mut Particle, geom: &Pincell, surface: Surface) -> Result<()> {
    p.direction = apply_boundary(p.direction, surface)?;
    // pin the coordinate onto the plane it reflected from
    let h = geom.half_pitch();
    match surface {
        Surface::XMin => p.position.x = -h,
        Surface::XMax => p.position.x = h,
        Surface::YMin => p.position.y = -h,
        Surface::YMax => p.position.y = h,
        Surface::ZMin => p.position.z = 0.0,
        Surface::ZMax => p.position.z = geom.height,
        Surface::Cylinder | Surface::AxialPlane(_) => {}
    }
    Ok(())
}

/// Collision kernel: pick a nuclide and a reaction channel.
pub fn collision_event(p: &mut Particle, ctx: &BatchContext<'_>) -> Result<Route> {
    let xs = p.macro_xs.ok_or_else(|| {
        Error::Logic(format!(
            "particle {} collided without cross sections",
            p.global_index
        ))
    })?;
    let cfg = ctx.config;
    let material_id = ctx.problem.geometry.material_of(p.cell);
    p.counters.collisions += 1;

    let k_estimate = p.weight * xs.nu_fission / xs.total;
    if k_estimate != 0.0 {
        p.log.push(LogEntry {
            bin: KEFF_BIN,
            value: k_estimate,
        });
    }

    if !p.has_partials {
        ctx.tables
            .macro_xs(material_id, p.energy, Some(&mut p.partials))?;
        p.counters.collision_xs_evals += p.partials.len() as u64;
    }
    if p.partials.is_empty() {
        return Err(Error::Physics(format!(
            "collision in empty material {material_id}"
        )));
    }

    let target = p.rng.uniform() * xs.total;
    let mut cumulative = 0.0;
    let mut pick = None;
    for (i, term) in p.partials.iter().enumerate() {
        cumulative += term.total;
        if target < cumulative {
            pick = Some(i);
            break;
        }
    }
    let pick = pick.unwrap_or_else(|| p.partials.iter().rposition(|t| t.total > 0.0).unwrap_or(0));
    let term = p.partials[pick];
    let composition = &ctx.problem.library.material(material_id)?.composition;
    let nuclide = composition[pick].0;

    let channel = p.rng.uniform() * term.total;
    if channel < term.scatter {
        p.direction = sample_isotropic(&mut p.rng);
        let (e, clamped) = scatter_energy_from(p.energy, cfg.alpha_scatter, p.rng.uniform());
        p.energy = e;
        p.energy_clamps += clamped as u32;
        p.invalidate_xs();
        p.trace(TraceEvent::Scatter { nuclide });
        return Ok(Route::Lookup);
    }

    p.alive = false;
    p.invalidate_xs();
    if channel < term.scatter + term.capture {
        p.fate = Some(Fate::Captured);
        p.trace(TraceEvent::Capture { nuclide });
        return Ok(Route::Dead);
    }

    let nu = ctx.problem.library.nuclides[nuclide as usize].nu;
    let n_sites = (nu / ctx.k_run + p.rng.uniform()).floor() as u32;
    for ordinal in 0..n_sites {
        let direction = sample_isotropic(&mut p.rng);
        let (energy, clamped) = fission_energy_from(cfg.fission_temperature, p.rng.uniform());
        p.energy_clamps += clamped as u32;
        p.sites.push(FissionSite {
            parent_index: p.global_index,
            site_ordinal: ordinal,
            position: p.position,
            energy,
            direction,
        });
    }
    p.fate = Some(Fate::Fissioned);
    p.trace(TraceEvent::Fission {
        nuclide,
        sites: n_sites,
    });
    Ok(Route::Dead)
}

/// Aborts histories that ran into the next stream window or logged too much.
pub fn check_history(p: &Particle, batch: u32) -> Result<()> {
    if p.rng.overlapped() {
        return Err(Error::StreamOverlap {
            batch,
            particle: p.global_index,
            draws: p.rng.draws(),
            stride: crate::prng::STRIDE,
        });
    }
    if p.log.len() > MAX_LOG_ENTRIES {
        return Err(Error::RunawayHistory {
            batch,
            particle: p.global_index,
            limit: MAX_LOG_ENTRIES,
        });
    }
    Ok(())
}
