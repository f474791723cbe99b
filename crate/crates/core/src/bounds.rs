//! Necessary CDF bounds for members of the super Pareto / Fréchet / Cauchy
//! classes.
//!
//! If `B ≤_skew F` then `B⁻¹∘F` is concave, so between two known points
//! `(a, F(a))`, `(b, F(b))`
//!
//! ```text
//! B⁻¹(F(x)) >= (1 − t)·B⁻¹(F(a)) + t·B⁻¹(F(b)),   t = (x − a)/(b − a)
//! ```
//!
//! and `F(x)` is bounded below by `B` of the right-hand side. A law whose
//! CDF falls below the bound is outside the class.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::{Error, Result};

/// Relative slack when comparing a CDF with its bound.
pub const EXCLUSION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Pareto,
    Frechet,
    Cauchy,
}

impl Baseline {
    pub const ALL: [Baseline; 3] = [Baseline::Pareto, Baseline::Frechet, Baseline::Cauchy];

    /// Pareto(1), Fréchet(1) or standard Cauchy.
    pub fn spec(&self) -> DistributionSpec {
        match self {
            Baseline::Pareto => DistributionSpec::pareto(1.0),
            Baseline::Frechet => DistributionSpec::frechet(1.0),
            Baseline::Cauchy => DistributionSpec::cauchy(),
        }
    }
}

/// Known CDF values, strictly increasing in both coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct CdfConstraintSet(Vec<(f64, f64)>);

impl CdfConstraintSet {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        for &(x, p) in &points {
            if !x.is_finite() {
                return Err(Error::InvalidGrid);
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityDomain(p));
            }
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1)) {
            return Err(Error::InvalidGrid);
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.0
    }
}

impl TryFrom<Vec<(f64, f64)>> for CdfConstraintSet {
    type Error = Error;

    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CdfConstraintSet> for Vec<(f64, f64)> {
    fn from(c: CdfConstraintSet) -> Self {
        c.0
    }
}

/// Lower bound on `F(query_x)` for any `F` in the class of `baseline`.
///
/// At a constraint abscissa the constraint probability is returned. Queries
/// outside the constraint hull are refused.
pub fn necessary_bound(baseline: Baseline, constraints: &CdfConstraintSet, query_x: f64) -> Result<f64> {
    let pts = constraints.points();
    let (lo, hi) = (pts[0].0, pts[pts.len() - 1].0);
    if !(query_x >= lo && query_x <= hi) {
        return Err(Error::Extrapolation { query: query_x, lo, hi });
    }
    if let Some(&(_, p)) = pts.iter().find(|(x, _)| *x == query_x) {
        return Ok(p);
    }
    let j = pts.partition_point(|(x, _)| *x < query_x);
    let ((xa, pa), (xb, pb)) = (pts[j - 1], pts[j]);
    for p in [pa, pb] {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityDomain(p));
        }
    }
    let g = baseline.spec();
    let (qa, qb) = (g.quantile(pa)?, g.quantile(pb)?);
    let t = (query_x - xa) / (xb - xa);
    let v = (1.0 - t) * qa + t * qb;
    g.cdf(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub x: f64,
    pub cdf: f64,
    pub bound: f64,
}

/// Builds constraints from `f` at `constraint_xs` (keeping points with
/// `0 < F < 1`) and reports every query where `F(x)` is below the bound.
/// Queries outside the usable hull are skipped.
pub fn exclusion_check(
    f: &DistributionSpec,
    baseline: Baseline,
    constraint_xs: &[f64],
    queries: &[f64],
) -> Result<Vec<Violation>> {
    f.validate()?;
    let mut pts = Vec::with_capacity(constraint_xs.len());
    for &x in constraint_xs {
        let p = f.cdf(x)?;
        if p > 0.0 && p < 1.0 && pts.last().is_none_or(|&(lx, lp): &(f64, f64)| x > lx && p > lp) {
            pts.push((x, p));
        }
    }
    if pts.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: pts.len(),
        });
    }
    let set = CdfConstraintSet::new(pts)?;
    let mut out = Vec::new();
    for &x in queries {
        let bound = match necessary_bound(baseline, &set, x) {
            Ok(b) => b,
            Err(Error::Extrapolation { .. }) => continue,
            Err(e) => return Err(e),
        };
        let cdf = f.cdf(x)?;
        if cdf < bound * (1.0 - EXCLUSION_SLACK) {
            out.push(Violation { x, cdf, bound });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn example() -> CdfConstraintSet {
        CdfConstraintSet::new(vec![(2.0, 0.4), (4.0, 0.8)]).unwrap()
    }

    #[test]
    fn pareto_bound_is_seven_tenths() {
        assert_abs_diff_eq!(necessary_bound(Baseline::Pareto, &example(), 3.0).unwrap(), 0.7, epsilon = 1e-15);
    }

    #[test]
    fn bound_at_a_constraint_point_is_the_constraint() {
        for b in Baseline::ALL {
            assert_eq!(necessary_bound(b, &example(), 4.0).unwrap(), 0.8);
        }
    }

    #[test]
    fn extrapolation_is_refused() {
        assert!(matches!(
            necessary_bound(Baseline::Cauchy, &example(), 5.0),
            Err(Error::Extrapolation { .. })
        ));
    }

    #[test]
    fn constraints_must_increase() {
        assert!(CdfConstraintSet::new(vec![(2.0, 0.4), (4.0, 0.4)]).is_err());
        assert!(CdfConstraintSet::new(vec![(2.0, 0.4), (1.0, 0.8)]).is_err());
        assert!(CdfConstraintSet::new(vec![(2.0, 1.4)]).is_err());
    }

    #[test]
    fn baseline_is_never_excluded() {
        let xs = [1.5, 2.0, 5.0, 9.0];
        let qs: Vec<f64> = (0..60).map(|i| 1.5 + 0.125 * i as f64).collect();
        assert!(exclusion_check(&DistributionSpec::pareto(1.0), Baseline::Pareto, &xs, &qs)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn uniform_middle_is_excluded() {
        let spec = DistributionSpec::mixture([
            (0.4, DistributionSpec::uniform(0.0, 2.0)),
            (0.4, DistributionSpec::uniform(2.0, 4.0)),
            (0.2, DistributionSpec::pareto(1.0).scaled(1.0, 3.0)),
        ]);
        let v = exclusion_check(&spec, Baseline::Cauchy, &[2.0, 4.0], &[3.0]).unwrap();
        assert_eq!(v.len(), 1);
        assert_abs_diff_eq!(v[0].cdf, 0.6, epsilon = 1e-15);
        assert!(v[0].bound > 0.65);
    }
}
