//! Counter-based randomness.
//!
//! Every random decision in the crate is a pure function of
//! `(seed, sample_id, step, slot)`. There is no generator state to share or
//! advance, so the order in which workers evaluate draws cannot change the
//! result. This is what lets the sample-parallel and transit-parallel
//! executors produce identical output.
//!
//! Bounded draws use fixed-point scaling (`(h * bound) >> 64`) instead of a
//! modulo. The bias is at most `bound / 2^64`, far below anything measurable.

use crate::error::{Error, Result};

/// Bumped whenever the output of [`prf_u64`] changes for any input.
pub const PRF_FORMAT_VERSION: u32 = 1;

const KEY_SEED: u64 = 0x9E37_79B9_7F4A_7C15;
const KEY_SAMPLE: u64 = 0xBF58_476D_1CE4_E5B9;
const KEY_STEP: u64 = 0x94D0_49BB_1331_11EB;
const KEY_SLOT: u64 = 0xD6E8_FEB8_6659_FD93;

#[inline(always)]
fn fmix64(mut h: u64) -> u64 {
    h ^= h >> 30;
    h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^ (h >> 31)
}

/// Raw 64-bit output keyed by the four counters.
#[inline]
pub fn prf_u64(seed: u64, sample_id: u64, step: u64, slot: u64) -> u64 {
    let mut h = fmix64(seed ^ KEY_SEED);
    h = fmix64(h ^ sample_id.wrapping_mul(KEY_SAMPLE).wrapping_add(KEY_SEED));
    h = fmix64(h ^ step.wrapping_mul(KEY_STEP).wrapping_add(KEY_SAMPLE));
    fmix64(h ^ slot.wrapping_mul(KEY_SLOT).wrapping_add(KEY_STEP))
}

#[inline]
pub(crate) fn scale(h: u64, bound: u64) -> u64 {
    ((h as u128 * bound as u128) >> 64) as u64
}

/// Uniform integer in `[0, bound)`.
pub fn prf_draw(seed: u64, sample_id: u64, step: u64, slot: u64, bound: u64) -> Result<u64> {
    if bound == 0 {
        return Err(Error::argument("prf_draw bound must be at least 1"));
    }
    Ok(scale(prf_u64(seed, sample_id, step, slot), bound))
}

/// Uniform float in `[0, 1)` with 53 bits of precision.
pub fn prf_unit(seed: u64, sample_id: u64, step: u64, slot: u64) -> f64 {
    (prf_u64(seed, sample_id, step, slot) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Derive an independent seed for a sub-computation.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    prf_u64(seed, u64::MAX, stream, u64::MAX)
}

/// Draws bound to one `(seed, sample, step, slot)` key.
///
/// A slot may need more than one random number; the `k`-th extra draw is
/// keyed with `k` in the upper half of the slot counter.
#[derive(Debug, Clone)]
pub struct Draws {
    seed: u64,
    sample_id: u64,
    step: u64,
    slot: u64,
    used: std::cell::Cell<u64>,
}

impl Draws {
    pub fn new(seed: u64, sample_id: u64, step: u64, slot: u64) -> Self {
        Self { seed, sample_id, step, slot, used: std::cell::Cell::new(0) }
    }

    /// First draw of the slot, uniform in `[0, bound)`. Returns 0 when `bound` is 0.
    pub fn draw(&self, bound: usize) -> usize {
        self.nth(0, bound)
    }

    pub fn nth(&self, k: u32, bound: usize) -> usize {
        if bound == 0 {
            return 0;
        }
        self.used.set(self.used.get() + 1);
        let slot = self.slot ^ ((k as u64) << 32);
        scale(prf_u64(self.seed, self.sample_id, self.step, slot), bound as u64) as usize
    }

    pub fn unit(&self, k: u32) -> f64 {
        self.used.set(self.used.get() + 1);
        prf_unit(self.seed, self.sample_id, self.step, self.slot ^ ((k as u64) << 32))
    }

    /// Number of draws taken through this handle.
    pub fn used(&self) -> u64 {
        self.used.get()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_one_is_zero() {
        for slot in 0..1000 {
            assert_eq!(prf_draw(42, 3, 1, slot, 1).unwrap(), 0);
        }
    }

    #[test]
    fn zero_bound_rejected() {
        assert!(matches!(prf_draw(1, 2, 3, 4, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn pure_function() {
        assert_eq!(prf_draw(7, 1, 2, 3, 1000).unwrap(), prf_draw(7, 1, 2, 3, 1000).unwrap());
        assert_eq!(prf_u64(7, 1, 2, 3), prf_u64(7, 1, 2, 3));
    }

    #[test]
    fn counters_are_not_interchangeable() {
        let a = prf_u64(1, 2, 3, 4);
        assert_ne!(a, prf_u64(1, 3, 2, 4));
        assert_ne!(a, prf_u64(1, 2, 4, 3));
        assert_ne!(a, prf_u64(2, 1, 3, 4));
    }

    #[test]
    fn uniform_over_ten_values() {
        let mut counts = [0u32; 10];
        for slot in 0..100_000 {
            counts[prf_draw(2024, 0, 0, slot, 10).unwrap() as usize] += 1;
        }
        for c in counts {
            assert!((9_500..=10_500).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn unit_in_range() {
        for slot in 0..10_000 {
            let u = prf_unit(9, 9, 9, slot);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn draws_counts_usage() {
        let d = Draws::new(1, 2, 3, 4);
        let first = d.draw(17);
        assert_eq!(first, d.nth(0, 17));
        assert_ne!(d.nth(1, 1 << 30), d.nth(2, 1 << 30));
        assert_eq!(d.used(), 4);
    }
}
