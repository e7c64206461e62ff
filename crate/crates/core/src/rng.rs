//! Deterministic, splittable randomness.
//!
//! Every stochastic routine in this crate takes a `u64` seed and derives its
//! generator through [`split_seed`], a SplitMix64 mix of `(seed, stream)`.
//! Replica `i` of any Monte Carlo driver uses stream `i`, so replicas are
//! reproducible independent of execution order and can run in parallel.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math;

/// The generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// SplitMix64 finalizer of `seed + (stream + 1) * golden`, the standard
/// counter-based way to derive independent sub-seeds from a master seed.
#[must_use]
pub fn split_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for stream `stream` of master seed `seed`.
#[must_use]
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    StreamRng::seed_from_u64(split_seed(seed, stream))
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
#[inline]
pub fn u01(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Uniform draw in `(0, 1)`; resamples the measure-zero `0.0`.
#[inline]
pub fn u01_open(rng: &mut impl RngCore) -> f64 {
    loop {
        let u = u01(rng);
        if u > 0.0 {
            return u;
        }
    }
}

/// Exponential waiting time with the given rate; `INFINITY` when the clock
/// is off (`rate <= 0`). Strictly positive, so event times never tie with
/// their predecessor on the same stream.
#[inline]
pub fn exp_time(rng: &mut impl RngCore, rate: f64) -> f64 {
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    -math::ln(u01_open(rng)) / rate
}

/// Bernoulli draw.
#[inline]
pub fn bernoulli(rng: &mut impl RngCore, p: f64) -> bool {
    u01(rng) < p
}

/// Uniform integer in `[0, n)`.
#[inline]
pub fn below(rng: &mut impl RngCore, n: u64) -> u64 {
    // Desk-scale n; modulo bias is < n / 2^64 and irrelevant here.
    rng.next_u64() % n
}
