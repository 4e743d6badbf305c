//! Skippable linear congruential streams.
//!
//! Every particle history owns a window of `STRIDE` draws carved out of a
//! single 2^63-period sequence, so the numbers a history sees depend only on
//! `(seed, batch, particle)` and never on the execution schedule.

/// LCG multiplier.
pub const MULTIPLIER: u64 = 2_806_196_910_506_780_709;
/// LCG increment.
pub const INCREMENT: u64 = 1;
/// Number of draws reserved for each particle history.
pub const STRIDE: u64 = 152_917;

const MASK: u64 = (1 << 63) - 1;
const INV_MODULUS: f64 = 1.0 / 9_223_372_036_854_775_808.0;
/// Largest double strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;
/// Offset of the per-batch coordinator streams, far above any particle window.
const BATCH_STREAM_BASE: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RngState(u64);

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState(seed & MASK)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    fn step(self) -> Self {
        RngState(MULTIPLIER.wrapping_mul(self.0).wrapping_add(INCREMENT) & MASK)
    }

    /// Advances the state and returns a uniform sample in [0, 1).
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        *self = self.step();
        let u = self.0 as f64 * INV_MODULUS;
        // states within 2^9 of the modulus round up to 2^63 when converted
        if u < 1.0 {
            u
        } else {
            BELOW_ONE
        }
    }

    /// State after `n` transitions, in O(log n).
    pub fn skip_ahead(self, n: u64) -> Self {
        let mut n = n & MASK;
        let mut mult = MULTIPLIER;
        let mut inc = INCREMENT;
        let mut acc_mult: u64 = 1;
        let mut acc_inc: u64 = 0;
        while n > 0 {
            if n & 1 == 1 {
                acc_mult = acc_mult.wrapping_mul(mult) & MASK;
                acc_inc = acc_inc.wrapping_mul(mult).wrapping_add(inc) & MASK;
            }
            inc = mult.wrapping_add(1).wrapping_mul(inc) & MASK;
            mult = mult.wrapping_mul(mult) & MASK;
            n >>= 1;
        }
        RngState(acc_mult.wrapping_mul(self.0).wrapping_add(acc_inc) & MASK)
    }
}

/// Functional form of [`RngState::next_uniform`].
pub fn next_uniform(state: RngState) -> (f64, RngState) {
    let mut s = state;
    let u = s.next_uniform();
    (u, s)
}

pub fn skip_ahead(state: RngState, n: u64) -> RngState {
    state.skip_ahead(n)
}

/// Start of the draw window for particle `particle` of batch `batch`.
pub fn seed_stream(master_seed: u64, batch: u64, particle: u64, max_particles: u64) -> RngState {
    let slot = batch as u128 * max_particles as u128 + particle as u128;
    let offset = (slot * STRIDE as u128) & MASK as u128;
    RngState::new(master_seed).skip_ahead(offset as u64)
}

/// Coordinator stream for batch-level sampling (bank resampling).
pub fn batch_stream(master_seed: u64, batch: u64) -> RngState {
    let offset = (BATCH_STREAM_BASE as u128 + batch as u128 * STRIDE as u128) & MASK as u128;
    RngState::new(master_seed).skip_ahead(offset as u64)
}

/// A particle-owned stream that counts its draws.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stream {
    state: RngState,
    draws: u64,
}

impl Stream {
    pub fn new(state: RngState) -> Self {
        Stream { state, draws: 0 }
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.state.next_uniform()
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn state(&self) -> RngState {
        self.state
    }

    /// Whether this stream has run into the next history's window.
    pub fn overlapped(&self) -> bool {
        self.draws >= STRIDE
    }
}
