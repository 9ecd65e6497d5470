//! Seeded randomness.
//!
//! All sampling goes through SplitMix64 (Steele, Lea and Flood): the state
//! advances by the constant `0x9E3779B97F4A7C15` and each output is the
//! state passed through the fixed finalizer, so output `k` depends only on
//! the seed and `k`. Trial `t` of an experiment with seed `s` starts from
//! state `s ^ (t · 0x9E3779B97F4A7C15)` (wrapping multiply). A uniform
//! double in `[0, 1)` is `(x >> 11) · 2⁻⁵³` of one 64-bit output, and every
//! ranged draw is `lo + (hi - lo) · u`. These three rules are all another
//! implementation needs to reproduce a corpus.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub struct TrialRng(SplitMix64);

impl TrialRng {
    pub fn new(state: u64) -> Self {
        TrialRng(SplitMix64::from_seed(state.to_le_bytes()))
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        TrialRng::new(seed ^ trial.wrapping_mul(GOLDEN_GAMMA))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform index below `n`, as `floor(u · n)`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    pub fn angle(&mut self) -> f64 {
        self.range(0.0, std::f64::consts::TAU)
    }
}
