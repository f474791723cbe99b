//! Univariate laws used throughout the crate.
//!
//! A [`DistributionSpec`] is a closed, immutable description of a law. All
//! evaluation goes through three operations:
//!
//! - [`DistributionSpec::cdf`], exact closed forms except for stable laws;
//! - [`DistributionSpec::quantile`], the generalized inverse
//!   `inf{x : F(x) >= u}`;
//! - [`sample`], deterministic in `(spec, seed, n)`.
//!
//! Values live on the extended real line: the deadly two-point law puts mass
//! on `+∞`, represented as `f64::INFINITY`.

mod closed;
pub mod stable;

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::rng::{self, BlockRng, BLOCK_LEN};
use crate::roots::invert_monotone;
use crate::{Error, Result};

pub use stable::{stable_cdf, stable_cdf_fourier, StableParams};

/// Mixture weights must sum to one within this tolerance.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Relative bracket width at which numerical quantile inversion stops.
pub const QUANTILE_REL_TOL: f64 = 1e-13;

/// An increasing convex map applied to a base law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConvexMap {
    /// `x ↦ x·eˣ`, increasing and convex on `[-1, ∞)`.
    XExpX,
    /// `x ↦ max(x, c) + x`.
    HingePlusIdentity { c: f64 },
}

impl ConvexMap {
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            ConvexMap::XExpX => {
                if x == f64::INFINITY {
                    f64::INFINITY
                } else {
                    x * libm::exp(x)
                }
            }
            ConvexMap::HingePlusIdentity { c } => x.max(c) + x,
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            ConvexMap::XExpX => closed::lambert_w0(y),
            ConvexMap::HingePlusIdentity { c } => {
                if y <= 2.0 * c {
                    y - c
                } else {
                    0.5 * y
                }
            }
        }
    }

    /// Left end of the region where the map is increasing and convex.
    pub fn domain_lo(&self) -> f64 {
        match self {
            ConvexMap::XExpX => -1.0,
            ConvexMap::HingePlusIdentity { .. } => f64::NEG_INFINITY,
        }
    }
}

/// One weighted component of a [`DistributionSpec::Mixture`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub spec: DistributionSpec,
}

/// Closed description of a univariate law.
///
/// Serializes as `{"family": "<name>", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "family",
    content = "params",
    rename_all = "snake_case",
    deny_unknown_fields
)]
pub enum DistributionSpec {
    /// `F(x) = 1 − x^{−α}` on `[1, ∞)`.
    Pareto { alpha: f64 },
    /// `F(x) = exp(−x^{−α})` on `[0, ∞)`.
    Frechet { alpha: f64 },
    /// Standard Cauchy.
    Cauchy {},
    /// Law of `|C|` for `C` standard Cauchy: `F(x) = 2 arctan(x)/π`.
    HalfCauchy {},
    /// Stable `S(α, β)` with unit scale and zero shift.
    Stable(StableParams),
    /// `P(X = ∞) = p = 1 − P(X = 0)`.
    TwoPointDeadly { p: f64 },
    Uniform { lo: f64, hi: f64 },
    /// Law of `scale·X + shift`.
    Scaled {
        base: Box<DistributionSpec>,
        scale: f64,
        shift: f64,
    },
    Mixture { components: Vec<MixtureComponent> },
    /// Law of `map(X)`.
    Transformed {
        base: Box<DistributionSpec>,
        map: ConvexMap,
    },
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eval {
    pub value: f64,
    pub error: f64,
}

impl Eval {
    pub(crate) fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

/// Quantile value with an error estimate and local slope `dq/du`.
///
/// `slope` is `NaN` when it was not measured (closed forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEval {
    pub value: f64,
    pub error: f64,
    pub slope: f64,
}

impl DistributionSpec {
    pub fn pareto(alpha: f64) -> Self {
        Self::Pareto { alpha }
    }

    pub fn frechet(alpha: f64) -> Self {
        Self::Frechet { alpha }
    }

    pub fn cauchy() -> Self {
        Self::Cauchy {}
    }

    pub fn half_cauchy() -> Self {
        Self::HalfCauchy {}
    }

    pub fn stable(alpha: f64, beta: f64) -> Self {
        Self::Stable(StableParams { alpha, beta })
    }

    pub fn deadly(p: f64) -> Self {
        Self::TwoPointDeadly { p }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        Self::Uniform { lo, hi }
    }

    /// Law of `scale·X + shift` for `X` distributed as `self`.
    pub fn scaled(self, scale: f64, shift: f64) -> Self {
        Self::Scaled {
            base: Box::new(self),
            scale,
            shift,
        }
    }

    pub fn transformed(self, map: ConvexMap) -> Self {
        Self::Transformed {
            base: Box::new(self),
            map,
        }
    }

    pub fn mixture<I: IntoIterator<Item = (f64, DistributionSpec)>>(parts: I) -> Self {
        Self::Mixture {
            components: parts
                .into_iter()
                .map(|(weight, spec)| MixtureComponent { weight, spec })
                .collect(),
        }
    }

    /// Checks every parameter domain, recursively.
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, v, "finite and > 0"))
            }
        }
        match self {
            Self::Pareto { alpha } | Self::Frechet { alpha } => positive("alpha", *alpha),
            Self::Cauchy {} | Self::HalfCauchy {} => Ok(()),
            Self::Stable(p) => p.validate(),
            Self::TwoPointDeadly { p } => {
                if (0.0..=1.0).contains(p) {
                    Ok(())
                } else {
                    Err(Error::param("p", *p, "in [0, 1]"))
                }
            }
            Self::Uniform { lo, hi } => {
                if lo.is_finite() && hi.is_finite() && lo < hi {
                    Ok(())
                } else {
                    Err(Error::param("hi", *hi, "finite and > lo"))
                }
            }
            Self::Scaled { base, scale, shift } => {
                positive("scale", *scale)?;
                if !shift.is_finite() {
                    return Err(Error::param("shift", *shift, "finite"));
                }
                base.validate()
            }
            Self::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::InsufficientData { needed: 1, got: 0 });
                }
                let mut total = 0.0;
                for c in components {
                    if !(c.weight >= 0.0 && c.weight.is_finite()) {
                        return Err(Error::param("weight", c.weight, "finite and >= 0"));
                    }
                    total += c.weight;
                    c.spec.validate()?;
                }
                if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(Error::param("weights", total, "summing to 1"));
                }
                Ok(())
            }
            Self::Transformed { base, map } => {
                base.validate()?;
                if let ConvexMap::HingePlusIdentity { c } = map {
                    if !c.is_finite() {
                        return Err(Error::param("c", *c, "finite"));
                    }
                }
                if base.support().0 < map.domain_lo() {
                    return Err(Error::SupportMismatch(
                        "base support extends below the convex region of the map",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Closed support interval `(lo, hi)` on the extended real line.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Pareto { .. } => (1.0, f64::INFINITY),
            Self::Frechet { .. } | Self::HalfCauchy {} => (0.0, f64::INFINITY),
            Self::Cauchy {} => (f64::NEG_INFINITY, f64::INFINITY),
            Self::Stable(p) => p.support(),
            Self::TwoPointDeadly { p } => {
                if *p >= 1.0 {
                    (f64::INFINITY, f64::INFINITY)
                } else {
                    (0.0, if *p > 0.0 { f64::INFINITY } else { 0.0 })
                }
            }
            Self::Uniform { lo, hi } => (*lo, *hi),
            Self::Scaled { base, scale, shift } => {
                let (lo, hi) = base.support();
                (scale * lo + shift, scale * hi + shift)
            }
            Self::Mixture { components } => components
                .iter()
                .filter(|c| c.weight > 0.0)
                .map(|c| c.spec.support())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |acc, s| {
                    (acc.0.min(s.0), acc.1.max(s.1))
                }),
            Self::Transformed { base, map } => {
                let (lo, hi) = base.support();
                (map.apply(lo), map.apply(hi))
            }
        }
    }

    /// True when the support lies in `[0, ∞]`.
    pub fn is_nonnegative(&self) -> bool {
        self.support().0 >= 0.0
    }

    /// Probability mass at `+∞`.
    pub fn mass_at_infinity(&self) -> f64 {
        match self {
            Self::TwoPointDeadly { p } => *p,
            Self::Scaled { base, .. } | Self::Transformed { base, .. } => base.mass_at_infinity(),
            Self::Mixture { components } => components
                .iter()
                .map(|c| c.weight * c.spec.mass_at_infinity())
                .sum(),
            _ => 0.0,
        }
    }

    /// Distribution function at `x`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        Ok(self.cdf_eval(x)?.value)
    }

    /// Distribution function with its absolute error estimate.
    pub fn cdf_with_error(&self, x: f64) -> Result<Eval> {
        self.validate()?;
        self.cdf_eval(x)
    }

    /// Generalized inverse `inf{x : F(x) >= u}` for `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        Ok(self.quantile_with_error(u)?.value)
    }

    pub fn quantile_with_error(&self, u: f64) -> Result<QuantileEval> {
        self.validate()?;
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::ProbabilityDomain(u));
        }
        self.quantile_eval(u)
    }

    /// Unvalidated evaluation; callers validate once up front.
    pub(crate) fn cdf_eval(&self, x: f64) -> Result<Eval> {
        if x.is_nan() {
            return Err(Error::param("x", x, "not NaN"));
        }
        Ok(match self {
            Self::Pareto { alpha } => Eval::exact(closed::pareto_cdf(*alpha, x)),
            Self::Frechet { alpha } => Eval::exact(closed::frechet_cdf(*alpha, x)),
            Self::Cauchy {} => Eval::exact(closed::cauchy_cdf(x)),
            Self::HalfCauchy {} => Eval::exact(closed::half_cauchy_cdf(x)),
            Self::Stable(p) => stable::cdf_eval(*p, x)?,
            Self::TwoPointDeadly { p } => Eval::exact(if x < 0.0 {
                0.0
            } else if x == f64::INFINITY {
                1.0
            } else {
                1.0 - p
            }),
            Self::Uniform { lo, hi } => Eval::exact(((x - lo) / (hi - lo)).clamp(0.0, 1.0)),
            Self::Scaled { base, scale, shift } => base.cdf_eval((x - shift) / scale)?,
            Self::Mixture { components } => {
                let mut out = Eval::exact(0.0);
                for c in components.iter().filter(|c| c.weight > 0.0) {
                    let e = c.spec.cdf_eval(x)?;
                    out.value += c.weight * e.value;
                    out.error += c.weight * e.error;
                }
                out.value = out.value.clamp(0.0, 1.0);
                out
            }
            Self::Transformed { base, map } => {
                let (lo, _) = base.support();
                if x < map.apply(lo) {
                    Eval::exact(0.0)
                } else if x == f64::INFINITY {
                    Eval::exact(1.0)
                } else {
                    base.cdf_eval(map.inverse(x))?
                }
            }
        })
    }

    pub(crate) fn quantile_eval(&self, u: f64) -> Result<QuantileEval> {
        let exact = |value| QuantileEval {
            value,
            error: 0.0,
            slope: f64::NAN,
        };
        Ok(match self {
            Self::Pareto { alpha } => exact(libm::pow(1.0 - u, -1.0 / alpha)),
            Self::Frechet { alpha } => exact(libm::pow(-libm::log(u), -1.0 / alpha)),
            Self::Cauchy {} => exact(closed::cauchy_quantile(u)),
            Self::HalfCauchy {} => exact(closed::half_cauchy_quantile(u)),
            Self::TwoPointDeadly { p } => exact(if u <= 1.0 - p { 0.0 } else { f64::INFINITY }),
            Self::Uniform { lo, hi } => exact(lo + u * (hi - lo)),
            Self::Scaled { base, scale, shift } => {
                let q = base.quantile_eval(u)?;
                QuantileEval {
                    value: scale * q.value + shift,
                    error: scale * q.error,
                    slope: scale * q.slope,
                }
            }
            Self::Transformed { base, map } => {
                let q = base.quantile_eval(u)?;
                let value = map.apply(q.value);
                // Local Lipschitz factor of the map for error propagation.
                let h = 1e-7 * q.value.abs().max(1.0);
                let lip = (map.apply(q.value + h) - map.apply(q.value - h)) / (2.0 * h);
                QuantileEval {
                    value,
                    error: lip * q.error,
                    slope: lip * q.slope,
                }
            }
            Self::Stable(_) | Self::Mixture { .. } => self.numeric_quantile(u)?,
        })
    }

    fn numeric_quantile(&self, u: f64) -> Result<QuantileEval> {
        if u > 1.0 - self.mass_at_infinity() {
            return Ok(QuantileEval {
                value: f64::INFINITY,
                error: 0.0,
                slope: f64::NAN,
            });
        }
        let (mut lo, mut hi) = match self {
            Self::Mixture { components } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for c in components.iter().filter(|c| c.weight > 0.0) {
                    let q = c.spec.quantile_eval(u)?.value;
                    lo = lo.min(q);
                    if q.is_finite() {
                        hi = hi.max(q);
                    }
                }
                (lo, hi)
            }
            _ => (-1.0, 1.0),
        };
        let (s_lo, s_hi) = self.support();
        if s_lo.is_finite() {
            let at_lo = self.cdf_eval(s_lo)?;
            if at_lo.value >= u {
                return Ok(QuantileEval {
                    value: s_lo,
                    error: 0.0,
                    slope: f64::NAN,
                });
            }
            lo = lo.max(s_lo);
        }
        if !lo.is_finite() {
            lo = -1.0;
        }
        if !hi.is_finite() || hi <= lo {
            hi = lo + 1.0;
        }
        if s_lo.is_finite() && lo <= s_lo {
            // F(s_lo) can carry an atom; step just below so the bracket is valid.
            lo = s_lo - 1e-3 * s_lo.abs().max(1.0);
        }
        if s_hi.is_finite() {
            hi = hi.min(s_hi);
        }
        let mut max_err: f64 = 0.0;
        let inv = invert_monotone(
            |x| {
                let e = self.cdf_eval(x)?;
                max_err = max_err.max(e.error);
                Ok::<_, Error>(e.value)
            },
            u,
            lo,
            hi,
            QUANTILE_REL_TOL,
        )?
        .ok_or(Error::NumericalAccuracy {
            estimate: f64::INFINITY,
            target: QUANTILE_REL_TOL,
        })?;
        let slope = inv.slope;
        let cdf_part = if slope.is_finite() { slope * max_err } else { 0.0 };
        Ok(QuantileEval {
            value: inv.value,
            error: inv.width + cdf_part,
            slope,
        })
    }

    /// One draw. `self` must be valid.
    pub(crate) fn draw(&self, rng: &mut BlockRng) -> f64 {
        match self {
            Self::Pareto { alpha } => libm::pow(rng.open01(), -1.0 / alpha),
            Self::Frechet { alpha } => libm::pow(rng.exp1(), -1.0 / alpha),
            Self::Cauchy {} => libm::tan(PI * (rng.open01() - 0.5)),
            Self::HalfCauchy {} => libm::tan(0.5 * PI * rng.open01()),
            Self::Stable(p) => stable::cms_draw(*p, rng),
            Self::TwoPointDeadly { p } => {
                if rng.open01() < *p {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Self::Uniform { lo, hi } => lo + (hi - lo) * rng.open01(),
            Self::Scaled { base, scale, shift } => scale * base.draw(rng) + shift,
            Self::Mixture { components } => {
                let pick = rng.open01();
                let mut acc = 0.0;
                let last = components.iter().rposition(|c| c.weight > 0.0).unwrap_or(0);
                for (i, c) in components.iter().enumerate() {
                    acc += c.weight;
                    if c.weight > 0.0 && (pick < acc || i == last) {
                        return c.spec.draw(rng);
                    }
                }
                components[last].spec.draw(rng)
            }
            Self::Transformed { base, map } => map.apply(base.draw(rng)),
        }
    }
}

/// A batch of draws on the extended real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub n: usize,
}

impl SampleBatch {
    pub fn new(values: Vec<f64>, seed: u64) -> Self {
        let n = values.len();
        Self { values, seed, n }
    }

    /// Finite values in ascending order.
    pub fn sorted_finite(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.values.iter().copied().filter(|x| x.is_finite()).collect();
        v.sort_unstable_by(f64::total_cmp);
        v
    }

    pub fn infinite_count(&self) -> usize {
        self.values.iter().filter(|x| **x == f64::INFINITY).count()
    }
}

/// Validated handle for block-wise sampling.
///
/// Block `b` of namespace `ns` always holds the same draws, so batches can be
/// assembled block by block in any order.
#[derive(Debug, Clone, Copy)]
pub struct Sampler<'a> {
    spec: &'a DistributionSpec,
}

impl<'a> Sampler<'a> {
    pub fn new(spec: &'a DistributionSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec })
    }

    pub fn spec(&self) -> &'a DistributionSpec {
        self.spec
    }

    /// Fills `out` (at most [`BLOCK_LEN`] long) with the draws of one block.
    pub fn fill_block(&self, seed: u64, namespace: u32, block: u32, out: &mut [f64]) {
        debug_assert!(out.len() <= BLOCK_LEN);
        let mut rng = BlockRng::new(seed, namespace, block);
        for v in out.iter_mut() {
            *v = self.spec.draw(&mut rng);
        }
    }

    /// Sequential batch of `n` draws from `namespace`.
    pub fn batch(&self, seed: u64, namespace: u32, n: usize) -> Vec<f64> {
        let mut values = vec![0.0; n];
        for (b, chunk) in values.chunks_mut(BLOCK_LEN).enumerate() {
            self.fill_block(seed, namespace, b as u32, chunk);
        }
        values
    }
}

/// `n` draws from `spec`, reproducible from `(spec, seed, n)`.
pub fn sample(spec: &DistributionSpec, seed: u64, n: usize) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if rng::block_count(n) > u32::MAX as usize {
        return Err(Error::param("n", n as f64, "fewer than 2^32 blocks"));
    }
    let sampler = Sampler::new(spec)?;
    Ok(SampleBatch::new(sampler.batch(seed, 0, n), seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cdf_examples() {
        assert_eq!(DistributionSpec::cauchy().cdf(0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(DistributionSpec::pareto(1.0).cdf(2.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            DistributionSpec::frechet(1.0).cdf(1.0).unwrap(),
            libm::exp(-1.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(DistributionSpec::half_cauchy().cdf(1.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn cdf_limits() {
        for spec in [
            DistributionSpec::cauchy(),
            DistributionSpec::pareto(0.5),
            DistributionSpec::frechet(2.0),
            DistributionSpec::half_cauchy(),
            DistributionSpec::deadly(0.3),
        ] {
            assert_eq!(spec.cdf(f64::NEG_INFINITY).unwrap(), 0.0, "{spec:?}");
            assert_eq!(spec.cdf(f64::INFINITY).unwrap(), 1.0, "{spec:?}");
        }
    }

    #[test]
    fn quantile_examples() {
        assert_abs_diff_eq!(DistributionSpec::pareto(1.0).quantile(0.5).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(DistributionSpec::cauchy().quantile(0.75).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            DistributionSpec::frechet(1.0).quantile(0.4).unwrap(),
            1.091_356_667_937_291_4,
            epsilon = 1e-14
        );
    }

    #[test]
    fn quantile_rejects_boundary_probabilities() {
        let c = DistributionSpec::cauchy();
        for u in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(c.quantile(u), Err(Error::ProbabilityDomain(_))));
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(DistributionSpec::pareto(0.0).cdf(2.0).is_err());
        assert!(DistributionSpec::frechet(-1.0).cdf(2.0).is_err());
        assert!(DistributionSpec::deadly(1.2).cdf(2.0).is_err());
        assert!(DistributionSpec::stable(2.5, 0.0).cdf(0.0).is_err());
        assert!(DistributionSpec::stable(1.0, 1.5).cdf(0.0).is_err());
        assert!(DistributionSpec::cauchy().scaled(-1.0, 0.0).cdf(0.0).is_err());
        let bad_mix = DistributionSpec::mixture([(0.5, DistributionSpec::cauchy()), (0.4, DistributionSpec::cauchy())]);
        assert!(bad_mix.cdf(0.0).is_err());
        let bad_map = DistributionSpec::cauchy().transformed(ConvexMap::XExpX);
        assert!(matches!(bad_map.validate(), Err(Error::SupportMismatch(_))));
    }

    #[test]
    fn deadly_quantile_and_cdf() {
        let d = DistributionSpec::deadly(0.3);
        assert_eq!(d.cdf(-1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(d.cdf(0.0).unwrap(), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(d.cdf(1e300).unwrap(), 0.7, epsilon = 1e-15);
        assert_eq!(d.quantile(0.7).unwrap(), 0.0);
        assert_eq!(d.quantile(0.71).unwrap(), f64::INFINITY);
    }

    #[test]
    fn pareto_samples_respect_support() {
        let b = sample(&DistributionSpec::pareto(1.0), 99, 10).unwrap();
        assert_eq!(b.values.len(), 10);
        assert!(b.values.iter().all(|&x| x >= 1.0));
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = DistributionSpec::mixture([
            (0.5, DistributionSpec::stable(0.7, 1.0)),
            (0.5, DistributionSpec::deadly(0.2)),
        ]);
        let a = sample(&spec, 5, 10_000).unwrap();
        let b = sample(&spec, 5, 10_000).unwrap();
        assert_eq!(a, b);
        let c = sample(&spec, 6, 10_000).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn zero_draws_is_an_error() {
        assert!(sample(&DistributionSpec::cauchy(), 0, 0).is_err());
    }

    #[test]
    fn mixture_quantile_inverts_mixture_cdf() {
        let spec = DistributionSpec::mixture([
            (0.4, DistributionSpec::uniform(0.0, 2.0)),
            (0.4, DistributionSpec::uniform(2.0, 4.0)),
            (0.2, DistributionSpec::pareto(1.0).scaled(1.0, 3.0)),
        ]);
        assert_abs_diff_eq!(spec.cdf(2.0).unwrap(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(spec.cdf(4.0).unwrap(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(spec.quantile(0.6).unwrap(), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.quantile(0.9).unwrap(), 5.0, epsilon = 1e-11);
    }

    #[test]
    fn mixture_with_deadly_part_has_infinite_upper_quantiles() {
        let spec = DistributionSpec::mixture([
            (0.5, DistributionSpec::deadly(0.5)),
            (0.5, DistributionSpec::uniform(0.0, 1.0)),
        ]);
        assert_abs_diff_eq!(spec.mass_at_infinity(), 0.25);
        assert_eq!(spec.quantile(0.8).unwrap(), f64::INFINITY);
        // F(0) = 0.25 from the atom at zero.
        assert_eq!(spec.quantile(0.2).unwrap(), 0.0);
    }

    #[test]
    fn transformed_spec_composes_quantiles() {
        let base = DistributionSpec::frechet(1.0);
        let t = base.clone().transformed(ConvexMap::XExpX);
        for u in [0.1, 0.5, 0.9] {
            let q = base.quantile(u).unwrap();
            assert_abs_diff_eq!(t.quantile(u).unwrap(), q * libm::exp(q), epsilon = 1e-12);
            let x = t.quantile(u).unwrap();
            assert_abs_diff_eq!(t.cdf(x).unwrap(), u, epsilon = 1e-12);
        }
        let h = DistributionSpec::cauchy().transformed(ConvexMap::HingePlusIdentity { c: 0.5 });
        assert_abs_diff_eq!(h.cdf(1.0).unwrap(), 0.5 + libm::atan(0.5) / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(h.cdf(3.0).unwrap(), 0.5 + libm::atan(1.5) / PI, epsilon = 1e-15);
    }
}
