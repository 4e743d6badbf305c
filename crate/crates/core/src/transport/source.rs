use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::prng::{seed_stream, Stream};

use super::kernels::BatchContext;
use super::particle::{FissionSite, OpCounters, Particle};
use super::physics::{fission_energy_from, sample_isotropic};

/// Birth state of particle `index` in the context's batch.
///
/// The first batch samples uniformly in the fuel cylinder with a fission
/// spectrum; later batches copy `ctx.source[index]`.
pub fn sample_source(ctx: &BatchContext<'_>, index: u64) -> Result<Particle> {
    let cfg = ctx.config;
    let mut state = seed_stream(cfg.seed, ctx.batch as u64, index, cfg.particles_per_batch);
    if cfg.fault_particle == Some(index) {
        state = state.skip_ahead(1);
    }
    let mut rng = Stream::new(state);
    let geom = &ctx.problem.geometry;
    let mut energy_clamps = 0;

    let (position, direction, energy) = match ctx.source {
        None => {
            let r = geom.fuel_radius;
            let (x, y) = loop {
                let x = (2.0 * rng.uniform() - 1.0) * r;
                let y = (2.0 * rng.uniform() - 1.0) * r;
                if x * x + y * y < r * r {
                    break (x, y);
                }
            };
            let z = rng.uniform() * geom.height;
            let direction = sample_isotropic(&mut rng);
            let (energy, clamped) = fission_energy_from(cfg.fission_temperature, rng.uniform());
            energy_clamps += clamped as u32;
            (Vec3::new(x, y, z), direction, energy)
        }
        Some(bank) => {
            let site = bank.get(index as usize).ok_or_else(|| {
                Error::Logic(format!(
                    "source index {index} beyond bank of {}",
                    bank.len()
                ))
            })?;
            (site.position, site.direction, site.energy)
        }
    };

    Ok(Particle {
        global_index: index,
        position,
        direction,
        energy,
        weight: 1.0,
        cell: geom.locate(position)?,
        rng,
        alive: true,
        macro_xs: None,
        partials: Vec::new(),
        has_partials: false,
        log: Vec::new(),
        sites: Vec::new(),
        fate: None,
        energy_clamps,
        counters: OpCounters::default(),
        trace: ctx.trace.then(Vec::new),
    })
}

/// Indices selected from a bank of `bank_len` sites to form `target` sources.
pub fn resample_indices(bank_len: usize, target: usize, u: f64) -> Vec<usize> {
    if bank_len >= target {
        let ratio = bank_len as f64 / target as f64;
        (0..target)
            .map(|i| (((i as f64 + u) * ratio).floor() as usize).min(bank_len - 1))
            .collect()
    } else {
        (0..target).map(|i| i % bank_len).collect()
    }
}

/// Population control: systematic sampling when the bank is large enough,
/// cycling through it in order otherwise.
pub fn resample_fission_bank(
    bank: &[FissionSite],
    target: usize,
    u: f64,
    batch: u32,
) -> Result<Vec<FissionSite>> {
    if bank.is_empty() {
        return Err(Error::PopulationCollapse { batch });
    }
    Ok(resample_indices(bank.len(), target, u)
        .into_iter()
        .map(|i| bank[i])
        .collect())
}
