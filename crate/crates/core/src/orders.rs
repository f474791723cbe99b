//! Stochastic orders.
//!
//! Two comparisons are provided:
//!
//! - first-order dominance `X ≤_st Y` (`F_X ≥ F_Y` everywhere), judged from
//!   samples against a two-sample DKW band;
//! - the skewness order `F ≤_skew G` (`G⁻¹∘F` convex), judged from the
//!   relative inverse on a quantile grid.
//!
//! Both verdicts are resolution-qualified. `Convex` means no violation above
//! tolerance was found on the stated grid; a witness for `Neither` is a
//! genuine local failure of convexity up to evaluation error.

use alloc::vec::Vec;

use libm::{exp, log, sqrt};
use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, SampleBatch};
use crate::{Error, Result};

/// Sorted finite part of a batch plus its total size, so that `+∞` draws
/// lower the ECDF at every finite point.
#[derive(Debug, Clone)]
pub struct Ecdf {
    finite: Vec<f64>,
    n: usize,
}

impl Ecdf {
    pub fn new(batch: &SampleBatch) -> Self {
        Self {
            finite: batch.sorted_finite(),
            n: batch.values.len(),
        }
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut finite: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
        finite.sort_unstable_by(f64::total_cmp);
        Self {
            finite,
            n: values.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sorted_finite(&self) -> &[f64] {
        &self.finite
    }

    /// Count of draws `<= t`.
    pub fn count_le(&self, t: f64) -> usize {
        if t == f64::INFINITY {
            return self.n;
        }
        self.finite.partition_point(|&v| v <= t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.count_le(t) as f64 / self.n as f64
    }

    /// Generalized inverse `inf{x : F_n(x) >= u}`.
    pub fn quantile(&self, u: f64) -> f64 {
        let k = libm::ceil(u * self.n as f64).max(1.0) as usize;
        if k > self.finite.len() {
            f64::INFINITY
        } else {
            self.finite[k - 1]
        }
    }
}

/// Two-sample Kolmogorov–Smirnov statistic `sup_t |F_X(t) − F_Y(t)|`.
pub fn two_sample_ks(x: &Ecdf, y: &Ecdf) -> f64 {
    let (a, b) = (x.sorted_finite(), y.sorted_finite());
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() || j < b.len() {
        let t = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => break,
        };
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / nx - j as f64 / ny).abs());
    }
    // Mass at +∞ is accounted for at the last finite point.
    d
}

/// Asymptotic two-sample KS critical value at `confidence`:
/// `sqrt(ln(2/(1−c))/2)·sqrt((n+m)/(nm))`.
pub fn ks_critical(n: usize, m: usize, confidence: f64) -> f64 {
    let n_eff = n as f64 * m as f64 / (n as f64 + m as f64);
    band_halfwidth(n_eff, confidence)
}

/// DKW half-width `sqrt(ln(2/(1−c))/(2 n))`.
pub fn band_halfwidth(n: f64, confidence: f64) -> f64 {
    sqrt(log(2.0 / (1.0 - confidence)) / (2.0 * n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `X ≤_st Y`.
    LeftDominatedByRight,
    /// `Y ≤_st X`.
    RightDominatedByLeft,
    Crossing,
    Inconclusive,
}

/// Outcome of an empirical `≤_st` comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub relation: Relation,
    /// Two-sample DKW half-width for `F_X − F_Y`.
    pub band_halfwidth: f64,
    pub confidence: f64,
    pub grid: Vec<f64>,
    /// Largest excursion against the reported relation.
    pub max_violation: f64,
    /// `max_t (F_X(t) − F_Y(t))` over the grid.
    pub d_plus: f64,
    /// `max_t (F_Y(t) − F_X(t))` over the grid.
    pub d_minus: f64,
    /// Grid points where the excursion against the relation exceeds the band.
    pub violations: usize,
    pub n_left: usize,
    pub n_right: usize,
}

/// Compares `X` (left) and `Y` (right) on `grid_size` points at merged
/// order-statistic midpoints.
///
/// `LeftDominatedByRight` requires `F_X − F_Y` to exceed the band somewhere
/// and `F_Y − F_X` to stay inside it everywhere; `Crossing` requires both
/// excursions to exceed it.
pub fn st_dominance(
    x: &SampleBatch,
    y: &SampleBatch,
    confidence: f64,
    grid_size: usize,
) -> Result<DominanceVerdict> {
    if x.values.is_empty() || y.values.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::ProbabilityDomain(confidence));
    }
    let (ex, ey) = (Ecdf::new(x), Ecdf::new(y));
    Ok(compare_ecdfs(&ex, &ey, confidence, grid_size))
}

pub fn compare_ecdfs(ex: &Ecdf, ey: &Ecdf, confidence: f64, grid_size: usize) -> DominanceVerdict {
    let grid = merged_grid(ex.sorted_finite(), ey.sorted_finite(), grid_size);
    let band = ks_critical(ex.len(), ey.len(), confidence);
    let mut d_plus: f64 = 0.0;
    let mut d_minus: f64 = 0.0;
    let (mut above_plus, mut above_minus) = (0usize, 0usize);
    for &t in &grid {
        let diff = ex.eval(t) - ey.eval(t);
        d_plus = d_plus.max(diff);
        d_minus = d_minus.max(-diff);
        if diff > band {
            above_plus += 1;
        }
        if -diff > band {
            above_minus += 1;
        }
    }
    let (relation, max_violation, violations) = match (d_plus > band, d_minus > band) {
        (true, false) => (Relation::LeftDominatedByRight, d_minus, above_minus),
        (false, true) => (Relation::RightDominatedByLeft, d_plus, above_plus),
        (true, true) => (Relation::Crossing, d_plus.min(d_minus), above_plus + above_minus),
        (false, false) => (Relation::Inconclusive, d_plus.max(d_minus), 0),
    };
    DominanceVerdict {
        relation,
        band_halfwidth: band,
        confidence,
        grid,
        max_violation,
        d_plus,
        d_minus,
        violations,
        n_left: ex.len(),
        n_right: ey.len(),
    }
}

/// Midpoints between adjacent distinct merged order statistics, at
/// `grid_size` evenly spaced merged ranks.
fn merged_grid(a: &[f64], b: &[f64], grid_size: usize) -> Vec<f64> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    merged.extend_from_slice(a);
    merged.extend_from_slice(b);
    merged.sort_unstable_by(f64::total_cmp);
    let n = merged.len();
    let mut grid: Vec<f64> = Vec::with_capacity(grid_size);
    if n < 2 || grid_size == 0 {
        return grid;
    }
    for j in 0..grid_size {
        let mut k = ((j + 1) * n / (grid_size + 1)).min(n - 2);
        while k + 1 < n && merged[k + 1] == merged[k] {
            k += 1;
        }
        if k + 1 >= n {
            continue;
        }
        let t = 0.5 * (merged[k] + merged[k + 1]);
        if grid.last().is_none_or(|&last| t > last) {
            grid.push(t);
        }
    }
    grid
}

/// `φ = G⁻¹∘F` evaluated on a grid, with points where `F ∈ {0, 1}` dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeInverse {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Absolute error estimate of each value.
    pub errors: Vec<f64>,
    pub dropped: Vec<f64>,
}

/// `φᵢ = quantile(g, cdf(f, xᵢ))`.
///
/// The output is forced nondecreasing (a running maximum removes inversion
/// noise); any correction applied is added to the error of that point.
pub fn relative_inverse(f: &DistributionSpec, g: &DistributionSpec, grid: &[f64]) -> Result<RelativeInverse> {
    f.validate()?;
    g.validate()?;
    check_grid(grid)?;
    let mut out = RelativeInverse {
        grid: Vec::with_capacity(grid.len()),
        values: Vec::with_capacity(grid.len()),
        errors: Vec::with_capacity(grid.len()),
        dropped: Vec::new(),
    };
    for &x in grid {
        let u = f.cdf_with_error(x)?;
        if !(u.value > 0.0 && u.value < 1.0) {
            log::warn!("grid point {x} maps to probability {} and is dropped", u.value);
            out.dropped.push(x);
            continue;
        }
        let q = g.quantile_with_error(u.value)?;
        if !q.value.is_finite() {
            log::warn!("grid point {x} maps to an infinite quantile and is dropped");
            out.dropped.push(x);
            continue;
        }
        let slope_part = if q.slope.is_finite() { q.slope.abs() * u.error } else { 0.0 };
        let mut value = q.value;
        let mut error = q.error + slope_part;
        if let Some(&prev) = out.values.last() {
            if value < prev {
                error += prev - value;
                value = prev;
            }
        }
        out.grid.push(x);
        out.values.push(value);
        out.errors.push(error);
    }
    Ok(out)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Convex,
    Concave,
    Neither,
    Indeterminate,
}

/// Interior point where convexity fails most.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub x: f64,
    pub second_difference: f64,
}

/// Convexity verdict for values on a grid.
///
/// `second_differences[i]` belongs to interior point `grid[i + 1]` and is the
/// chord gap `chord(xᵢ) − yᵢ` divided by the local spread
/// `max(|y_{i+1} − y_{i−1}|, |y_{i+1} − yᵢ|, |yᵢ − y_{i−1}|)`. It has the sign
/// of the divided second difference and is invariant under affine changes of
/// either coordinate, so `tolerance` is relative to the local value scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCertificate {
    pub verdict: Shape,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub second_differences: Vec<f64>,
    pub tolerance: f64,
    /// Largest normalized error bound over interior points.
    pub error_bound: f64,
    /// Most negative second difference, when negative.
    pub witness: Option<Witness>,
}

/// Classifies `values` on `grid`: `Convex` if every second difference is
/// `>= −tolerance` (preferred when the data are also concave within
/// tolerance), `Concave` if every one is `<= tolerance`, `Neither` otherwise.
/// `Indeterminate` when `errors` push the normalized error bound above
/// `tolerance`.
pub fn convexity_certificate(
    grid: &[f64],
    values: &[f64],
    errors: Option<&[f64]>,
    tolerance: f64,
) -> Result<ConvexityCertificate> {
    if grid.len() != values.len() || errors.is_some_and(|e| e.len() != grid.len()) {
        return Err(Error::InvalidGrid);
    }
    check_grid(grid)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid);
    }
    if grid.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: grid.len(),
        });
    }
    let n = grid.len();
    let mut sd = Vec::with_capacity(n - 2);
    let mut error_bound: f64 = 0.0;
    for i in 1..n - 1 {
        let (x0, x1, x2) = (grid[i - 1], grid[i], grid[i + 1]);
        let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
        let w = (x1 - x0) / (x2 - x0);
        let gap = y0 + (y2 - y0) * w - y1;
        let spread = (y2 - y0).abs().max((y2 - y1).abs()).max((y1 - y0).abs());
        let s = if spread > 0.0 { gap / spread } else { 0.0 };
        if let Some(e) = errors {
            let raw = (1.0 - w) * e[i - 1] + w * e[i + 1] + e[i];
            let bound = if spread > 0.0 {
                raw / spread
            } else if raw > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            error_bound = error_bound.max(bound);
        }
        sd.push(s);
    }
    let (mut min_i, mut min_s, mut max_s) = (0usize, f64::INFINITY, f64::NEG_INFINITY);
    for (i, &s) in sd.iter().enumerate() {
        if s < min_s {
            min_s = s;
            min_i = i;
        }
        max_s = max_s.max(s);
    }
    let verdict = if error_bound > tolerance {
        Shape::Indeterminate
    } else if min_s >= -tolerance {
        Shape::Convex
    } else if max_s <= tolerance {
        Shape::Concave
    } else {
        Shape::Neither
    };
    let witness = (min_s < 0.0).then(|| Witness {
        index: min_i + 1,
        x: grid[min_i + 1],
        second_difference: min_s,
    });
    Ok(ConvexityCertificate {
        verdict,
        grid: grid.to_vec(),
        values: values.to_vec(),
        second_differences: sd,
        tolerance,
        error_bound,
        witness,
    })
}

/// `n` probabilities uniform in `logit(u)` between `lo` and `hi`, so the grid
/// thickens geometrically toward both tails.
pub fn logit_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(Error::ProbabilityDomain(if lo > 0.0 && lo < 1.0 { hi } else { lo }));
    }
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let (a, b) = (logit(lo), logit(hi));
    Ok((0..n)
        .map(|j| {
            if j == 0 {
                lo
            } else if j == n - 1 {
                hi
            } else {
                let z = a + (b - a) * j as f64 / (n - 1) as f64;
                1.0 / (1.0 + exp(-z))
            }
        })
        .collect())
}

fn logit(u: f64) -> f64 {
    log(u / (1.0 - u))
}

/// Tests `F ≤_skew G`: builds `xᵢ = F⁻¹(uᵢ)` on a logit grid over `u_range`,
/// evaluates `φ = G⁻¹∘F` and certifies its convexity.
///
/// A `Convex` verdict is a necessary-condition check at grid resolution.
pub fn skew_order_check(
    f: &DistributionSpec,
    g: &DistributionSpec,
    u_range: (f64, f64),
    grid_size: usize,
    tolerance: f64,
) -> Result<ConvexityCertificate> {
    let us = logit_grid(u_range.0, u_range.1, grid_size)?;
    let mut xs: Vec<f64> = Vec::with_capacity(us.len());
    for &u in &us {
        let x = f.quantile(u)?;
        if x.is_finite() && xs.last().is_none_or(|&last| x > last) {
            xs.push(x);
        }
    }
    let phi = relative_inverse(f, g, &xs)?;
    convexity_certificate(&phi.grid, &phi.values, Some(&phi.errors), tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::sample;

    fn batch(values: &[f64]) -> SampleBatch {
        SampleBatch::new(values.to_vec(), 0)
    }

    #[test]
    fn ecdf_treats_infinity_as_largest() {
        let e = Ecdf::new(&batch(&[1.0, f64::INFINITY, 0.0, 2.0]));
        assert_eq!(e.eval(1.5), 0.5);
        assert_eq!(e.eval(1e300), 0.75);
        assert_eq!(e.eval(f64::INFINITY), 1.0);
        assert_eq!(e.quantile(0.75), 2.0);
        assert_eq!(e.quantile(0.8), f64::INFINITY);
    }

    #[test]
    fn ks_of_disjoint_samples_is_one() {
        let a = Ecdf::new(&batch(&[0.0, 1.0, 2.0]));
        let b = Ecdf::new(&batch(&[5.0, 6.0]));
        assert_eq!(two_sample_ks(&a, &b), 1.0);
        assert_eq!(two_sample_ks(&a, &a), 0.0);
    }

    #[test]
    fn identical_batches_are_inconclusive() {
        let x = sample(&DistributionSpec::cauchy(), 7, 5000).unwrap();
        let v = st_dominance(&x, &x, 0.99, 200).unwrap();
        assert_eq!(v.relation, Relation::Inconclusive);
        assert_eq!(v.d_plus, 0.0);
        assert_eq!(v.d_minus, 0.0);
    }

    #[test]
    fn shifted_cauchy_dominates() {
        let x = sample(&DistributionSpec::cauchy(), 1, 100_000).unwrap();
        let y = sample(&DistributionSpec::cauchy().scaled(1.0, 0.5), 2, 100_000).unwrap();
        let v = st_dominance(&x, &y, 0.99, 200).unwrap();
        assert_eq!(v.relation, Relation::LeftDominatedByRight);
        assert_eq!(v.violations, 0);
        let w = st_dominance(&y, &x, 0.99, 200).unwrap();
        assert_eq!(w.relation, Relation::RightDominatedByLeft);
    }

    #[test]
    fn grid_avoids_jumps() {
        let g = merged_grid(&[0.0, 0.0, 0.0, 1.0], &[0.0, 2.0], 10);
        for t in &g {
            assert!(*t != 0.0 && *t != 1.0 && *t != 2.0);
        }
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn convexity_of_parabola_and_its_negative() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let c = convexity_certificate(&xs, &sq, None, 1e-7).unwrap();
        assert_eq!(c.verdict, Shape::Convex);
        assert!(c.witness.is_none());
        let neg: Vec<f64> = sq.iter().map(|v| -v).collect();
        assert_eq!(convexity_certificate(&xs, &neg, None, 1e-7).unwrap().verdict, Shape::Concave);
        let cube: Vec<f64> = xs.iter().map(|x| (x - 2.0).powi(3)).collect();
        let n = convexity_certificate(&xs, &cube, None, 1e-7).unwrap();
        assert_eq!(n.verdict, Shape::Neither);
        assert!(n.witness.unwrap().x < 2.0);
    }

    #[test]
    fn linear_data_is_convex() {
        let xs = [0.0, 1.0, 3.0, 4.0];
        let ys = [1.0, 3.0, 7.0, 9.0];
        assert_eq!(convexity_certificate(&xs, &ys, None, 1e-7).unwrap().verdict, Shape::Convex);
        let flat = [2.0; 4];
        assert_eq!(convexity_certificate(&xs, &flat, None, 1e-7).unwrap().verdict, Shape::Convex);
    }

    #[test]
    fn large_errors_make_the_verdict_indeterminate() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 1.0, 4.0];
        let c = convexity_certificate(&xs, &ys, Some(&[0.0, 1e-3, 0.0]), 1e-7).unwrap();
        assert_eq!(c.verdict, Shape::Indeterminate);
    }

    #[test]
    fn short_grids_are_rejected() {
        assert!(matches!(
            convexity_certificate(&[0.0, 1.0], &[0.0, 1.0], None, 1e-7),
            Err(Error::InsufficientData { needed: 3, got: 2 })
        ));
        assert_eq!(convexity_certificate(&[0.0, 0.0, 1.0], &[0.0; 3], None, 1e-7), Err(Error::InvalidGrid));
    }

    #[test]
    fn logit_grid_is_symmetric_and_increasing() {
        let g = logit_grid(0.01, 0.99, 11).unwrap();
        assert_eq!(g[0], 0.01);
        assert_eq!(g[10], 0.99);
        assert!((g[5] - 0.5).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        for i in 0..11 {
            assert!((g[i] + g[10 - i] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn relative_inverse_drops_points_outside_the_support() {
        let r = relative_inverse(
            &DistributionSpec::pareto(1.0),
            &DistributionSpec::frechet(1.0),
            &[0.5, 1.0, 2.0, 4.0],
        )
        .unwrap();
        assert_eq!(r.dropped, [0.5, 1.0]);
        assert_eq!(r.grid, [2.0, 4.0]);
    }

    #[test]
    fn skew_identity_is_convex() {
        let c = skew_order_check(&DistributionSpec::cauchy(), &DistributionSpec::cauchy(), (0.01, 0.99), 200, 1e-7)
            .unwrap();
        assert_eq!(c.verdict, Shape::Convex);
        assert!(c.second_differences.iter().all(|s| s.abs() < 1e-9));
    }

    #[test]
    fn half_cauchy_is_not_more_skewed_than_frechet() {
        let c = skew_order_check(
            &DistributionSpec::frechet(1.0),
            &DistributionSpec::half_cauchy(),
            (0.01, 0.99),
            200,
            1e-7,
        )
        .unwrap();
        assert_eq!(c.verdict, Shape::Neither);
        assert!(c.witness.unwrap().second_difference < -1e-4);
    }
}
