//! Counter-based seed derivation.
//!
//! Every random draw in the crate comes from a generator seeded by
//! `derive(base, &[label, counter, ...])`. Streams never share state, so a
//! trial, a source or an antenna produces the same numbers no matter which
//! thread evaluates it or in what order.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Generator used for every stream.
pub type StreamRng = Xoshiro256PlusPlus;

pub(crate) const LABEL_POSITIONS: u64 = 0x504f_5349;
pub(crate) const LABEL_FADING: u64 = 0x4641_4445;
pub(crate) const LABEL_TRIAL: u64 = 0x5452_4941;
pub(crate) const LABEL_DENSITY: u64 = 0x4445_4e53;
pub(crate) const LABEL_RESTART: u64 = 0x5245_5354;
pub(crate) const LABEL_DEVICES: u64 = 0x4445_5649;
pub(crate) const LABEL_RANDOMIZE: u64 = 0x5241_4e44;
pub(crate) const LABEL_BASELINE: u64 = 0x4241_5345;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `base` and a path of labels/counters.
pub fn derive(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix64(base), |acc, &part| mix64(acc ^ mix64(part)))
}

/// Opens the stream for `seed`.
#[inline]
pub fn stream(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}
