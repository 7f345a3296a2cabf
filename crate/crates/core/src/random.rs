//! Seeded random inputs for property checks.
//!
//! The seed comes from the `GQM_SEED` environment variable when set, so a
//! failing randomized run can be replayed exactly.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{adjoint, AlgebraElement};
use crate::groupoid::FiniteGroupoid;
use crate::measure::Event;

pub const SEED_VAR: &str = "GQM_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed_2019;

pub fn base_seed() -> u64 {
    std::env::var(SEED_VAR).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// A generator for one named check, derived from the base seed.
pub fn rng_for(tag: &str) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    tag.hash(&mut h);
    ChaCha8Rng::seed_from_u64(base_seed() ^ h.finish())
}

/// Coefficients with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_element(rng: &mut impl Rng, len: usize) -> AlgebraElement {
    AlgebraElement::from_coeffs(
        (0..len).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
    )
}

/// `(f + f*) / 2` for a random `f`.
pub fn random_self_adjoint(rng: &mut impl Rng, g: &FiniteGroupoid) -> AlgebraElement {
    let f = random_element(rng, g.len());
    let fs = adjoint(g, &f).expect("same groupoid");
    (&f + &fs).scale(Complex64::new(0.5, 0.0))
}

/// Each transition included with probability one half.
pub fn random_event(rng: &mut impl Rng, len: usize) -> Event {
    Event::from_ids(len, (0..len).filter(|_| rng.random_bool(0.5)))
}

/// Three pairwise-disjoint events: every transition lands in one of the
/// three events or in none, uniformly.
pub fn random_disjoint_triple(rng: &mut impl Rng, len: usize) -> [Event; 3] {
    let slots: Vec<usize> = (0..len).map(|_| rng.random_range(0..4)).collect();
    let pick = |k: usize| Event::from_ids(len, (0..len).filter(|&i| slots[i] == k));
    [pick(0), pick(1), pick(2)]
}
