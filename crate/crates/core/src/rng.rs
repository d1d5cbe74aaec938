//! The single pseudo-random generator used by every run.
//!
//! `Rng` wraps xoshiro256++ seeded through SplitMix64 (`seed_from_u64`), so a
//! 64-bit seed fully determines a run on every platform. Run seeds are
//! derived as `(base ^ fnv1a(cell key)) + run index`, see [`derive_seed`].

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Clone, Debug)]
pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }
}

impl RngCore for Rng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// 64-bit FNV-1a. Stable across releases and platforms, unlike `std`'s hasher.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Seed of run `run` in the cell identified by `cell_key`.
pub fn derive_seed(base: u64, cell_key: &str, run: u64) -> u64 {
    (base ^ fnv1a(cell_key.as_bytes())).wrapping_add(run)
}
