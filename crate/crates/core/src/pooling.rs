//! Linear risk sharing experiments.
//!
//! A pool realizes `Y = Σ θᵢ Xᵢ` with `Xᵢ` i.i.d. Components are put in a
//! canonical order (weight descending, zero weights dropped) and the
//! component of rank `r` draws from RNG namespace `r + 1`; namespace `0`
//! is the unpooled reference batch. Permuting the weights therefore
//! reproduces the pooled batch bit for bit.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;
use serde::{Deserialize, Serialize};

use crate::distributions::{sample, DistributionSpec, SampleBatch, Sampler};
use crate::orders::{st_dominance, DominanceVerdict, Ecdf};
use crate::rng::{self, BLOCK_LEN};
use crate::stable_calculus::WeightVector;
use crate::{Error, Result};

/// Below this many draws a dominance verdict is flagged as informal.
pub const VERDICT_MIN_N: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolConfig {
    pub spec: DistributionSpec,
    pub weights: WeightVector,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

fn default_confidence() -> f64 {
    0.99
}

impl PoolConfig {
    pub fn new(spec: DistributionSpec, weights: WeightVector, n: usize, seed: u64) -> Self {
        Self {
            spec,
            weights,
            n,
            seed,
            confidence: default_confidence(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.n == 0 {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if rng::block_count(self.n) > u32::MAX as usize {
            return Err(Error::param("n", self.n as f64, "fewer than 2^32 blocks"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::ProbabilityDomain(self.confidence));
        }
        Ok(())
    }
}

/// Positive weights in canonical order; the index is the component rank.
pub fn canonical_weights(w: &WeightVector) -> Vec<f64> {
    let mut v: Vec<f64> = w.as_slice().iter().copied().filter(|&t| t > 0.0).collect();
    v.sort_unstable_by(|a, b| b.total_cmp(a));
    v
}

/// Fills block `block` of the pooled batch.
pub fn pool_block(sampler: &Sampler<'_>, weights: &[f64], seed: u64, block: u32, out: &mut [f64]) {
    out.fill(0.0);
    let mut draws = vec![0.0; out.len()];
    for (rank, &theta) in weights.iter().enumerate() {
        sampler.fill_block(seed, rank as u32 + 1, block, &mut draws);
        for (acc, &x) in out.iter_mut().zip(&draws) {
            *acc += theta * x;
        }
    }
}

/// `n` realizations of `Σ θᵢ Xᵢ`. A `+∞` summand with positive weight makes
/// the realization `+∞`.
pub fn pool_sample(cfg: &PoolConfig) -> Result<SampleBatch> {
    cfg.validate()?;
    let sampler = Sampler::new(&cfg.spec)?;
    let weights = canonical_weights(&cfg.weights);
    let mut values = vec![0.0; cfg.n];
    for (b, chunk) in values.chunks_mut(BLOCK_LEN).enumerate() {
        pool_block(&sampler, &weights, cfg.seed, b as u32, chunk);
    }
    Ok(SampleBatch::new(values, cfg.seed))
}

/// `(u, q_pool(u)/q_single(u))` points of the empirical quantile penalty.
pub type PenaltyCurve = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversificationReport {
    /// Left is the single risk, right the pool.
    pub verdict: DominanceVerdict,
    /// Only for nonnegative specs.
    pub penalty_curve: Option<PenaltyCurve>,
    pub seed: u64,
    pub n: usize,
    pub confidence: f64,
    pub warnings: Vec<String>,
}

/// Compares a single risk (namespace 0) with the pool built from the same
/// seed.
pub fn diversification_report(cfg: &PoolConfig, grid_size: usize) -> Result<DiversificationReport> {
    let single = sample(&cfg.spec, cfg.seed, cfg.n)?;
    let pooled = pool_sample(cfg)?;
    report_from_batches(cfg, &single, &pooled, grid_size)
}

/// Report assembly shared with drivers that generate the batches themselves.
pub fn report_from_batches(
    cfg: &PoolConfig,
    single: &SampleBatch,
    pooled: &SampleBatch,
    grid_size: usize,
) -> Result<DiversificationReport> {
    let verdict = st_dominance(single, pooled, cfg.confidence, grid_size)?;
    let mut warnings = Vec::new();
    if cfg.n < VERDICT_MIN_N {
        warnings.push(alloc::format!(
            "n = {} is below {VERDICT_MIN_N}; the verdict is informal",
            cfg.n
        ));
    }
    let penalty_curve = cfg.spec.is_nonnegative().then(|| {
        let (es, ep) = (Ecdf::new(single), Ecdf::new(pooled));
        (1..=99)
            .map(|k| {
                let u = k as f64 / 100.0;
                (u, ep.quantile(u) / es.quantile(u))
            })
            .collect()
    });
    Ok(DiversificationReport {
        verdict,
        penalty_curve,
        seed: cfg.seed,
        n: cfg.n,
        confidence: cfg.confidence,
        warnings,
    })
}

/// Risk on `{0, +∞}` pooled with `weights`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeadlyRiskSpec {
    pub p: f64,
    pub weights: WeightVector,
}

impl DeadlyRiskSpec {
    pub fn new(p: f64, weights: WeightVector) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityDomain(p));
        }
        Ok(Self { p, weights })
    }
}

/// `P(Y = ∞) = 1 − (1 − p)^k`, `k = #{θᵢ > 0}`.
pub fn deadly_pool_prob(d: &DeadlyRiskSpec) -> Result<f64> {
    if !(d.p > 0.0 && d.p < 1.0) {
        return Err(Error::ProbabilityDomain(d.p));
    }
    // q_k = p + (1 − p)·q_{k−1} avoids the cancellation in 1 − (1 − p)^k.
    let mut q = 0.0;
    for _ in 0..d.weights.support_size() {
        q = d.p + (1.0 - d.p) * q;
    }
    Ok(q)
}

/// Monte Carlo estimate of `E(t − X)₊`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopLoss {
    pub t: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
}

/// Mean of `max(t − xᵢ, 0)` (`+∞` contributes `0`) with its standard error.
/// The integrand is bounded by `t − inf X`, so the estimate is valid for
/// infinite-mean laws.
pub fn stop_loss(samples: &SampleBatch, t: f64) -> Result<StopLoss> {
    if t.is_nan() {
        return Err(Error::param("t", t, "not NaN"));
    }
    let n = samples.values.len();
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let terms: Vec<f64> = samples.values.iter().map(|&x| (t - x).max(0.0)).collect();
    let mean = pairwise_sum(&terms) / n as f64;
    let sq: Vec<f64> = terms.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = if n > 1 { pairwise_sum(&sq) / (n - 1) as f64 } else { 0.0 };
    Ok(StopLoss {
        t,
        estimate: mean,
        std_error: sqrt(var / n as f64),
        n,
    })
}

/// Sum with a fixed binary tree shape.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if v.len() <= LEAF {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

/// `0.4·U(0,2) + 0.4·U(2,4) + 0.2·(3 + Pareto(1))`: infinite mean, with
/// `P(X <= 2) = 0.4` and `P(2 < X <= 4) = 0.4`.
pub fn example_construction() -> DistributionSpec {
    DistributionSpec::mixture([
        (0.4, DistributionSpec::uniform(0.0, 2.0)),
        (0.4, DistributionSpec::uniform(2.0, 4.0)),
        (0.2, DistributionSpec::pareto(1.0).scaled(1.0, 3.0)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::Relation;
    use approx::assert_abs_diff_eq;

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn deadly_probabilities() {
        let p = |ws: &[f64]| deadly_pool_prob(&DeadlyRiskSpec::new(0.3, w(ws)).unwrap()).unwrap();
        assert_eq!(p(&[1.0]), 0.3);
        assert_eq!(p(&[0.5, 0.5]), 0.51);
        assert_eq!(p(&[0.5, 0.5, 0.0]), 0.51);
        assert!(DeadlyRiskSpec::new(1.0, w(&[1.0])).is_err());
    }

    #[test]
    fn degenerate_pool_equals_its_component_stream() {
        let cfg = PoolConfig::new(DistributionSpec::pareto(1.0), w(&[1.0, 0.0]), 5000, 3);
        let pooled = pool_sample(&cfg).unwrap();
        let direct = Sampler::new(&cfg.spec).unwrap().batch(3, 1, 5000);
        assert_eq!(pooled.values, direct);
    }

    #[test]
    fn permutation_of_weights_is_bit_exact() {
        let spec = DistributionSpec::stable(1.0, 1.0);
        let a = pool_sample(&PoolConfig::new(spec.clone(), w(&[0.2, 0.5, 0.3]), 9000, 11)).unwrap();
        let b = pool_sample(&PoolConfig::new(spec, w(&[0.3, 0.2, 0.5]), 9000, 11)).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn deadly_pool_contains_infinities() {
        let cfg = PoolConfig::new(DistributionSpec::deadly(0.3), w(&[0.5, 0.5]), 10_000, 1);
        let b = pool_sample(&cfg).unwrap();
        let frac = b.infinite_count() as f64 / 1e4;
        assert!((frac - 0.51).abs() < 3.0 * (0.51f64 * 0.49 / 1e4).sqrt());
        assert!(b.values.iter().all(|&v| v == 0.0 || v == f64::INFINITY));
    }

    #[test]
    fn stop_loss_basics() {
        let zeros = SampleBatch::new(vec![0.0; 10], 0);
        let s = stop_loss(&zeros, 1.0).unwrap();
        assert_eq!((s.estimate, s.std_error), (1.0, 0.0));
        let p = sample(&DistributionSpec::pareto(1.0), 0, 1000).unwrap();
        assert_eq!(stop_loss(&p, 1.0).unwrap().estimate, 0.0);
        let inf = SampleBatch::new(vec![f64::INFINITY; 4], 0);
        assert_eq!(stop_loss(&inf, 5.0).unwrap().estimate, 0.0);
    }

    #[test]
    fn example_construction_meets_its_constraints() {
        let e = example_construction();
        assert_abs_diff_eq!(e.cdf(2.0).unwrap(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(e.cdf(4.0).unwrap(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(e.cdf(3.0).unwrap(), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn small_runs_carry_a_warning() {
        let cfg = PoolConfig::new(DistributionSpec::pareto(1.0), w(&[0.5, 0.5]), 200, 0);
        let r = diversification_report(&cfg, 50).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.penalty_curve.unwrap().len(), 99);
    }

    #[test]
    fn pareto_pool_is_worse() {
        let cfg = PoolConfig::new(DistributionSpec::pareto(1.0), w(&[0.5, 0.5]), 20_000, 5);
        let r = diversification_report(&cfg, 200).unwrap();
        assert_eq!(r.verdict.relation, Relation::LeftDominatedByRight);
        assert!(r.penalty_curve.unwrap().iter().all(|&(_, q)| q >= 1.0 - 0.05));
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
    }
}
