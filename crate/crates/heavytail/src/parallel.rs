use heavytail_core::distributions::Sampler;
use heavytail_core::pooling::{canonical_weights, pool_block, report_from_batches, DiversificationReport, PoolConfig};
use heavytail_core::rng::{block_count, BLOCK_LEN};
use heavytail_core::{DistributionSpec, Error, SampleBatch};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HEAVYTAIL_THREADS";

/// Worker cap from [`THREADS_ENV`]; `None` when unset, empty or not a
/// positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Thread pool plus the parallel counterparts of the core sampling routines.
pub struct Engine {
    pool: ThreadPool,
}

impl Engine {
    /// `threads = None` uses one worker per available core.
    pub fn with_threads(threads: Option<usize>) -> anyhow::Result<Self> {
        let mut b = ThreadPoolBuilder::new();
        if let Some(n) = threads {
            b = b.num_threads(n);
        }
        Ok(Self { pool: b.build()? })
    }

    pub fn from_env() -> anyhow::Result<Self> {
        Self::with_threads(threads_from_env())
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Draws of `namespace`, identical to [`Sampler::batch`].
    pub fn batch(&self, spec: &DistributionSpec, seed: u64, namespace: u32, n: usize) -> heavytail_core::Result<Vec<f64>> {
        check_n(n)?;
        let sampler = Sampler::new(spec)?;
        let mut values = vec![0.0; n];
        self.pool.install(|| {
            values
                .par_chunks_mut(BLOCK_LEN)
                .enumerate()
                .for_each(|(b, chunk)| sampler.fill_block(seed, namespace, b as u32, chunk));
        });
        Ok(values)
    }

    /// Same values as [`heavytail_core::distributions::sample`].
    pub fn sample(&self, spec: &DistributionSpec, seed: u64, n: usize) -> heavytail_core::Result<SampleBatch> {
        Ok(SampleBatch::new(self.batch(spec, seed, 0, n)?, seed))
    }

    /// Same values as [`heavytail_core::pooling::pool_sample`].
    pub fn pool_sample(&self, cfg: &PoolConfig) -> heavytail_core::Result<SampleBatch> {
        cfg.validate()?;
        let sampler = Sampler::new(&cfg.spec)?;
        let weights = canonical_weights(&cfg.weights);
        let mut values = vec![0.0; cfg.n];
        self.pool.install(|| {
            values
                .par_chunks_mut(BLOCK_LEN)
                .enumerate()
                .for_each(|(b, chunk)| pool_block(&sampler, &weights, cfg.seed, b as u32, chunk));
        });
        Ok(SampleBatch::new(values, cfg.seed))
    }

    /// Same result as [`heavytail_core::pooling::diversification_report`].
    pub fn diversification_report(&self, cfg: &PoolConfig, grid_size: usize) -> heavytail_core::Result<DiversificationReport> {
        let single = self.sample(&cfg.spec, cfg.seed, cfg.n)?;
        let pooled = self.pool_sample(cfg)?;
        report_from_batches(cfg, &single, &pooled, grid_size)
    }

    /// Runs `f` inside the worker pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

fn check_n(n: usize) -> heavytail_core::Result<()> {
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if block_count(n) > u32::MAX as usize {
        return Err(Error::ParameterDomain {
            name: "n",
            value: n as f64,
            expected: "fewer than 2^32 blocks",
        });
    }
    Ok(())
}
