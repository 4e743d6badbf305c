use std::time::Instant;

use crate::error::Result;
use crate::result::KernelTimings;

use super::kernels::{
    advance_event, check_history, collision_event, xs_lookup_event, BatchContext, Route,
};
use super::source::sample_source;
use super::SetOutput;

/// Transports each source index birth to death, one after another.
pub(crate) fn transport(ctx: &BatchContext<'_>, indices: &[u64]) -> Result<SetOutput> {
    let mut timings = KernelTimings::default();
    let mut records = Vec::with_capacity(indices.len());
    for &index in indices {
        let mut p = sample_source(ctx, index)?;
        let mut route = Route::Lookup;
        while route != Route::Dead {
            let t0 = Instant::now();
            route = match route {
                Route::Lookup => {
                    let r = xs_lookup_event(&mut p, ctx)?;
                    timings.lookup += t0.elapsed().as_secs_f64();
                    r
                }
                Route::Advance => {
                    let r = advance_event(&mut p, ctx)?;
                    timings.advance += t0.elapsed().as_secs_f64();
                    r
                }
                Route::Collision => {
                    let r = collision_event(&mut p, ctx)?;
                    timings.collision += t0.elapsed().as_secs_f64();
                    r
                }
                Route::Dead => unreachable!(),
            };
            check_history(&p, ctx.batch)?;
        }
        records.push(p.into_record());
    }
    Ok(SetOutput {
        records,
        timings,
        max_live: indices.len().min(1) as u64,
    })
}
