//! Deterministic splittable seeding.
//!
//! One root seed; children are independent ChaCha streams indexed by a
//! counter, so attempt k of any randomized stage is reproducible in
//! isolation.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn root(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` under `seed`.
pub fn child(seed: u64, index: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Derives a fresh root seed for a named sub-stage.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    child(seed, index).next_u64()
}
