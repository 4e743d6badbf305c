use std::cmp::Ordering;
use std::mem;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::Pincell;
use crate::result::KernelTimings;

use super::kernels::{
    advance_event, check_history, collision_event, xs_lookup_event, BatchContext, Route,
};
use super::particle::{Particle, ParticleRecord};
use super::source::sample_source;
use super::SetOutput;

/// Slot-index queues driving the event scheduler.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventQueues {
    pub lookup: Vec<usize>,
    pub advance: Vec<usize>,
    pub collision: Vec<usize>,
    pub in_flight: usize,
    pub next_source_cursor: usize,
}

impl EventQueues {
    /// Largest queue first; ties go lookup, then advance, then collision.
    pub fn next_kernel(&self) -> Option<Route> {
        let candidates = [
            (self.lookup.len(), Route::Lookup),
            (self.advance.len(), Route::Advance),
            (self.collision.len(), Route::Collision),
        ];
        let mut best: Option<(usize, Route)> = None;
        for (len, route) in candidates {
            if len > 0 && best.is_none_or(|(b, _)| len > b) {
                best = Some((len, route));
            }
        }
        best.map(|(_, r)| r)
    }

    fn queue_mut(&mut self, route: Route) -> &mut Vec<usize> {
        match route {
            Route::Lookup => &mut self.lookup,
            Route::Advance => &mut self.advance,
            Route::Collision => &mut self.collision,
            Route::Dead => unreachable!("dead particles are not queued"),
        }
    }
}

fn compare_keys(a: &(u32, f64), b: &(u32, f64)) -> Ordering {
    a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Stable sort of queue entries by `keys[slot]` = (material, energy).
pub fn sort_queue_by_key(queue: &mut [usize], keys: &[(u32, f64)]) {
    queue.sort_by(|&a, &b| compare_keys(&keys[a], &keys[b]));
}

/// Orders the lookup queue by material of the current cell, then energy.
pub fn sort_lookup_queue(queue: &mut [usize], particles: &[Option<Particle>], geometry: &Pincell) {
    let key = |slot: usize| {
        let p = particles[slot]
            .as_ref()
            .expect("queued slot holds a live particle");
        (geometry.material_of(p.cell), p.energy)
    };
    queue.sort_by(|&a, &b| compare_keys(&key(a), &key(b)));
}

/// Event-based transport of `indices` with at most `max_in_flight` live
/// particles, refilling freed slots from the remaining indices in order.
pub(crate) fn transport(ctx: &BatchContext<'_>, indices: &[u64]) -> Result<SetOutput> {
    let cfg = ctx.config;
    let capacity = (cfg.max_in_flight as usize).min(indices.len());
    let mut timings = KernelTimings::default();
    let mut records: Vec<ParticleRecord> = Vec::with_capacity(indices.len());
    let mut slots: Vec<Option<Particle>> = Vec::with_capacity(capacity);
    let mut q = EventQueues::default();

    for slot in 0..capacity {
        slots.push(Some(sample_source(ctx, indices[slot])?));
        q.lookup.push(slot);
    }
    q.in_flight = capacity;
    q.next_source_cursor = capacity;
    let mut max_live = capacity as u64;

    let mut launches_of_lookup: u64 = 0;
    let mut work: Vec<usize> = Vec::new();
    let mut freed: Vec<usize> = Vec::new();

    while let Some(kernel) = q.next_kernel() {
        let t0 = Instant::now();
        if kernel == Route::Lookup
            && cfg.sort_enabled
            && launches_of_lookup.is_multiple_of(cfg.sort_every_n as u64)
        {
            sort_lookup_queue(&mut q.lookup, &slots, &ctx.problem.geometry);
            let t1 = Instant::now();
            timings.sort += (t1 - t0).as_secs_f64();
        }
        let t_kernel = Instant::now();
        mem::swap(&mut work, q.queue_mut(kernel));
        for &slot in &work {
            let p = slots[slot]
                .as_mut()
                .ok_or_else(|| Error::Logic(format!("slot {slot} queued but empty")))?;
            let route = match kernel {
                Route::Lookup => xs_lookup_event(p, ctx)?,
                Route::Advance => advance_event(p, ctx)?,
                Route::Collision => collision_event(p, ctx)?,
                Route::Dead => unreachable!(),
            };
            check_history(p, ctx.batch)?;
            if route == Route::Dead {
                let p = slots[slot].take().expect("slot checked above");
                records.push(p.into_record());
                freed.push(slot);
                q.in_flight -= 1;
            } else {
                q.queue_mut(route).push(slot);
            }
        }
        work.clear();
        let elapsed = t_kernel.elapsed().as_secs_f64();
        match kernel {
            Route::Lookup => {
                launches_of_lookup += 1;
                timings.lookup += elapsed;
            }
            Route::Advance => timings.advance += elapsed,
            Route::Collision => timings.collision += elapsed,
            Route::Dead => {}
        }

        freed.sort_unstable();
        for slot in freed.drain(..) {
            if q.next_source_cursor < indices.len() {
                slots[slot] = Some(sample_source(ctx, indices[q.next_source_cursor])?);
                q.next_source_cursor += 1;
                q.lookup.push(slot);
                q.in_flight += 1;
            }
        }
        max_live = max_live.max(q.in_flight as u64);
        if q.in_flight > capacity {
            return Err(Error::Logic(format!(
                "{} particles in flight, cap {capacity}",
                q.in_flight
            )));
        }
    }

    if records.len() != indices.len() {
        return Err(Error::Logic(format!(
            "event executor finished {} of {} histories",
            records.len(),
            indices.len()
        )));
    }
    Ok(SetOutput {
        records,
        timings,
        max_live,
    })
}
