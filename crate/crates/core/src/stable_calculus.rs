//! Exact law of `Σ θᵢ Xᵢ` for i.i.d. `Xᵢ ~ S(α, β)`, `α <= 1`.
//!
//! With `w = θ`:
//!
//! ```text
//! α < 1:  Σ θᵢ Xᵢ  =ᵈ  γ·Z,   γ = (Σ wᵢ^α)^{1/α} >= 1
//! α = 1:  Σ θᵢ Xᵢ  =ᵈ  Z + δ, δ = −(2β/π) Σ wᵢ ln wᵢ
//! ```
//!
//! which puts `S(α, β)` in the class of laws made stochastically larger by
//! pooling exactly when `α = 1, β >= 0` or `α < 1, β = 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{log, pow};
use serde::{Deserialize, Serialize};

use crate::distributions::{StableParams, WEIGHT_SUM_TOL};
use crate::{Error, Result};

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        for &w in &weights {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::param("weight", w, "finite and >= 0"));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::param("sum of weights", total, "1 within 1e-12"));
        }
        Ok(Self(weights))
    }

    /// `n` equal weights `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        Ok(Self(alloc::vec![1.0 / n as f64; n]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of strictly positive weights.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|w| **w > 0.0).count()
    }

    pub fn is_degenerate(&self) -> bool {
        self.support_size() == 1
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// `Σ θᵢ Xᵢ =ᵈ gamma·Z + delta` with `Z ~ base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixResult {
    pub gamma: f64,
    pub delta: f64,
    pub base: StableParams,
}

/// Scale and shift of the pooled stable law. Zero weights contribute
/// nothing (`0·ln 0 = 0`).
pub fn mix_params(params: StableParams, w: &WeightVector) -> Result<MixResult> {
    params.validate()?;
    let alpha = params.alpha;
    if alpha > 1.0 {
        return Err(Error::OutOfScope("alpha > 1"));
    }
    let positive = w.as_slice().iter().copied().filter(|&t| t > 0.0);
    if alpha == 1.0 {
        let entropy: f64 = positive.map(|t| -t * log(t)).sum();
        Ok(MixResult {
            gamma: 1.0,
            delta: 2.0 * params.beta / PI * entropy,
            base: params,
        })
    } else {
        let pos: Vec<f64> = positive.collect();
        // k equal weights w: γ = k^{1/α}·w, exact for uniform pools.
        let gamma = if pos.windows(2).all(|p| p[0] == p[1]) {
            pow(pos.len() as f64, 1.0 / alpha) * pos[0]
        } else {
            pow(pos.iter().map(|&t| pow(t, alpha)).sum::<f64>(), 1.0 / alpha)
        };
        Ok(MixResult {
            gamma,
            delta: 0.0,
            base: params,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DMinusVerdict {
    InDMinus,
    NotInDMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DMinusReason {
    /// `α = 1, β >= 0`: pooling shifts by `δ >= 0`.
    AlphaOneNonnegativeSkew,
    /// `α < 1, β = 1`: nonnegative law, pooling scales by `γ >= 1`.
    AlphaBelowOneTotallySkewed,
    /// `α > 1`: `E|Z| < ∞`, so the mean is preserved by pooling.
    FiniteMean,
    /// `α = 1, β < 0`: `δ < 0`.
    NegativeShift,
    /// `α < 1, |β| < 1` or `β = −1`: `P(Z >= 0) = 1` fails, so
    /// `P(γZ <= x) >= P(Z <= x)` cannot hold for all `x` with `γ > 1`.
    NotNonnegative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DMinusClassification {
    pub verdict: DMinusVerdict,
    pub reason: DMinusReason,
}

impl DMinusReason {
    pub fn describe(&self) -> &'static str {
        match self {
            Self::AlphaOneNonnegativeSkew => "alpha = 1 and beta >= 0: pooled law is Z + delta with delta >= 0",
            Self::AlphaBelowOneTotallySkewed => "alpha < 1 and beta = 1: pooled law is gamma*Z with gamma >= 1, Z >= 0",
            Self::FiniteMean => "alpha > 1: E|Z| < infinity",
            Self::NegativeShift => "alpha = 1 and beta < 0: delta < 0",
            Self::NotNonnegative => "alpha < 1 and beta < 1: P(Z >= 0) < 1",
        }
    }
}

pub fn d_minus_classify(params: StableParams) -> Result<DMinusClassification> {
    params.validate()?;
    let (verdict, reason) = if params.alpha > 1.0 {
        (DMinusVerdict::NotInDMinus, DMinusReason::FiniteMean)
    } else if params.alpha == 1.0 {
        if params.beta >= 0.0 {
            (DMinusVerdict::InDMinus, DMinusReason::AlphaOneNonnegativeSkew)
        } else {
            (DMinusVerdict::NotInDMinus, DMinusReason::NegativeShift)
        }
    } else if params.beta == 1.0 {
        (DMinusVerdict::InDMinus, DMinusReason::AlphaBelowOneTotallySkewed)
    } else {
        (DMinusVerdict::NotInDMinus, DMinusReason::NotNonnegative)
    };
    Ok(DMinusClassification { verdict, reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn sp(a: f64, b: f64) -> StableParams {
        StableParams::new(a, b).unwrap()
    }

    #[test]
    fn cauchy_pools_to_itself() {
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let m = mix_params(sp(1.0, 0.0), &w).unwrap();
        assert_eq!((m.gamma, m.delta), (1.0, 0.0));
    }

    #[test]
    fn shift_and_scale_examples() {
        let half = WeightVector::uniform(2).unwrap();
        assert_abs_diff_eq!(
            mix_params(sp(1.0, 1.0), &half).unwrap().delta,
            2.0 * core::f64::consts::LN_2 / PI,
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(mix_params(sp(0.5, 1.0), &half).unwrap().gamma, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_weights_are_ignored() {
        let a = WeightVector::new(vec![0.5, 0.5, 0.0]).unwrap();
        let b = WeightVector::uniform(2).unwrap();
        assert_eq!(mix_params(sp(1.0, 0.4), &a).unwrap(), mix_params(sp(1.0, 0.4), &b).unwrap());
        assert_eq!(mix_params(sp(0.6, 1.0), &a).unwrap(), mix_params(sp(0.6, 1.0), &b).unwrap());
    }

    #[test]
    fn finite_mean_regime_is_rejected() {
        let w = WeightVector::uniform(2).unwrap();
        assert_eq!(mix_params(sp(1.5, 0.0), &w), Err(Error::OutOfScope("alpha > 1")));
    }

    #[test]
    fn weights_are_validated() {
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![-0.1, 1.1]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::new(vec![1.0]).unwrap().is_degenerate());
    }

    #[test]
    fn classification_table() {
        let c = |a, b| d_minus_classify(sp(a, b)).unwrap();
        assert_eq!(c(1.0, 0.0).verdict, DMinusVerdict::InDMinus);
        assert_eq!(c(0.7, 1.0).reason, DMinusReason::AlphaBelowOneTotallySkewed);
        assert_eq!(c(1.2, 1.0).reason, DMinusReason::FiniteMean);
        assert_eq!(c(1.0, -0.3).reason, DMinusReason::NegativeShift);
        assert_eq!(c(0.7, 0.9).reason, DMinusReason::NotNonnegative);
        assert_eq!(c(0.7, 0.9).verdict, DMinusVerdict::NotInDMinus);
    }
}
