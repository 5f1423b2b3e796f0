//! Deterministic, path-addressed random substreams.
//!
//! A [`RandomSource`] is a root seed plus a path of integers. Each distinct
//! path names an independent stream; the same `(seed, path)` always yields
//! the same draws, so the order in which parallel workers consume
//! substreams never changes results.

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;

/// Generator handed to clients. One instance per substream.
pub type StreamRng = Pcg64Mcg;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RandomSource {
    seed: u64,
    path: Vec<u64>,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            path: Vec::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Child source whose path is this path extended by `path`.
    pub fn derive(&self, path: &[u64]) -> Self {
        let mut full = Vec::with_capacity(self.path.len() + path.len());
        full.extend_from_slice(&self.path);
        full.extend_from_slice(path);
        Self {
            seed: self.seed,
            path: full,
        }
    }

    /// Generator for this substream.
    pub fn rng(&self) -> StreamRng {
        stream_rng(self.seed, &self.path)
    }

    /// Generator for the child at `index`; same stream as `derive(&[index]).rng()`.
    pub fn child_rng(&self, index: u64) -> StreamRng {
        let mut state = start(self.seed);
        for (i, &step) in self.path.iter().enumerate() {
            state = absorb(state, i, step);
        }
        finish(absorb(state, self.path.len(), index), self.path.len() + 1)
    }
}

/// Generator for `(seed, path)` without materialising a [`RandomSource`].
pub fn stream_rng(seed: u64, path: &[u64]) -> StreamRng {
    let mut state = start(seed);
    for (i, &step) in path.iter().enumerate() {
        state = absorb(state, i, step);
    }
    finish(state, path.len())
}

#[inline]
fn start(seed: u64) -> (u64, u64) {
    (
        mix64(seed ^ 0x5851_f42d_4c95_7f2d),
        mix64(seed.wrapping_add(GOLDEN_GAMMA)),
    )
}

#[inline]
fn absorb((lo, hi): (u64, u64), position: usize, step: u64) -> (u64, u64) {
    let tweak = (position as u64 + 1).wrapping_mul(GOLDEN_GAMMA);
    (
        mix64(lo ^ step.wrapping_add(tweak)),
        mix64(hi.wrapping_add(step) ^ tweak.rotate_left(17)),
    )
}

// The path length is folded in so that `[0]` and `[0, 0]` differ.
#[inline]
fn finish((lo, hi): (u64, u64), len: usize) -> StreamRng {
    let lo = mix64(lo ^ len as u64);
    let hi = mix64(hi ^ lo);
    let state = ((hi as u128) << 64) | lo as u128;
    Pcg64Mcg::from_seed(state.to_le_bytes())
}

/// Derives a substream of `root` at `path`. `path` must be non-empty.
pub fn derive_substream(root: &RandomSource, path: &[u64]) -> RandomSource {
    debug_assert!(!path.is_empty(), "substream path must be non-empty");
    root.derive(path)
}
