//! Seeded uniform sampling without pulling in the full `rand` stack.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub(crate) fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample in `[0, 1)` from the top 53 bits of one output word.
pub(crate) fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform sample in `[-1, 1)`.
pub(crate) fn symmetric_f64(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * unit_f64(rng) - 1.0
}

/// Complex sample with both components uniform in `[-1, 1)`.
pub(crate) fn symmetric_complex(rng: &mut ChaCha8Rng) -> num_complex::Complex64 {
    let re = symmetric_f64(rng);
    let im = symmetric_f64(rng);
    num_complex::Complex64::new(re, im)
}
