//! Counter-based random streams.
//!
//! Every block of a batch draws from its own ChaCha8 stream, addressed by
//! `(seed, namespace, block)`. Namespace 0 is used by single-risk batches and
//! namespace `r + 1` by the pool component of canonical rank `r`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Number of draws per block. Fixed: changing it changes every batch.
pub const BLOCK_LEN: usize = 4096;

/// Stream id for a `(namespace, block)` pair.
#[inline]
pub fn stream_id(namespace: u32, block: u32) -> u64 {
    (u64::from(namespace) << 32) | u64::from(block)
}

/// Random source for one block.
pub struct BlockRng {
    inner: ChaCha8Rng,
}

impl BlockRng {
    pub fn new(seed: u64, namespace: u32, block: u32) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id(namespace, block));
        Self { inner }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    #[inline]
    pub fn open01(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    /// Standard exponential.
    #[inline]
    pub fn exp1(&mut self) -> f64 {
        -libm::log(self.open01())
    }
}

/// Number of blocks needed for `n` draws.
pub fn block_count(n: usize) -> usize {
    n.div_ceil(BLOCK_LEN)
}
