//! Super-heavy-tail classes.
//!
//! For a baseline `B`, `F` is *super B* when `B ≤_skew F`, i.e. the map
//! `F⁻¹∘B` from baseline quantiles to `F` quantiles is convex. The baselines
//! are Pareto(1) (`S_P`), Fréchet(1) (`S_F`) and the standard Cauchy law
//! (`S_C`), with `S_P ⊂ S_F ⊂ S_C`.
//!
//! Class `H` holds nonnegative laws whose `h_F(x) = −log F(1/x)` is
//! subadditive.
//!
//! Verdicts: `Pass` means no violation was found at the configured
//! resolution, `Fail` carries an explicit witness.

use alloc::format;
use alloc::vec::Vec;

use libm::{exp, log, pow};
use serde::{Deserialize, Serialize};

use crate::bounds::Baseline;
use crate::distributions::{DistributionSpec, StableParams};
use crate::orders::{skew_order_check, ConvexityCertificate, Shape};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Pass,
    Fail,
    Indeterminate,
    NotApplicable,
}

impl Membership {
    fn from_shape(s: Shape) -> Self {
        match s {
            Shape::Convex => Membership::Pass,
            Shape::Concave | Shape::Neither => Membership::Fail,
            Shape::Indeterminate => Membership::Indeterminate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    pub u_range: (f64, f64),
    pub grid_size: usize,
    pub tolerance: f64,
    /// Log-spaced abscissae `(lo, hi, count)` for the subadditivity test.
    pub h_grid: (f64, f64, usize),
}

impl Default for ClassConfig {
    fn default() -> Self {
        Self {
            u_range: (0.01, 0.99),
            grid_size: 200,
            tolerance: 1e-7,
            h_grid: (1e-3, 1e2, 100),
        }
    }
}

/// `h_F(x) = −log F(1/x)`; `+∞` when `F(1/x) = 0`.
///
/// For Fréchet(α) this is `x^α`, returned exactly.
pub fn h_transform(f: &DistributionSpec, x: f64) -> Result<f64> {
    f.validate()?;
    if !f.is_nonnegative() {
        return Err(Error::SupportMismatch("h requires support in [0, inf)"));
    }
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::param("x", x, "> 0"));
    }
    if let DistributionSpec::Frechet { alpha } = f {
        return Ok(if *alpha == 1.0 { x } else { pow(x, *alpha) });
    }
    let p = f.cdf(1.0 / x)?;
    Ok(if p == 0.0 { f64::INFINITY } else { -log(p) })
}

/// Outcome of the pairwise test `h(x + y) <= h(x) + h(y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityEvidence {
    pub grid: Vec<f64>,
    /// `max h(x+y) − h(x) − h(y)` over tested pairs.
    pub max_excess: f64,
    pub verdict: Membership,
    /// Pair attaining `max_excess` when the verdict is `Fail`.
    pub witness: Option<(f64, f64)>,
    pub tolerance: f64,
    /// Pairs skipped because only one side of the inequality was infinite.
    pub skipped: usize,
}

/// Exhaustive test over all pairs `x <= y` of the grid.
pub fn subadditivity_check(f: &DistributionSpec, grid: &[f64], tolerance: f64) -> Result<SubadditivityEvidence> {
    if grid.is_empty() || grid.iter().any(|x| !(*x > 0.0 && x.is_finite())) || grid.windows(2).any(|w| !(w[1] > w[0]))
    {
        return Err(Error::InvalidGrid);
    }
    let h: Vec<f64> = grid.iter().map(|&x| h_transform(f, x)).collect::<Result<_>>()?;
    let mut max_excess = f64::NEG_INFINITY;
    let mut arg = (grid[0], grid[0]);
    let mut skipped = 0usize;
    for i in 0..grid.len() {
        for j in i..grid.len() {
            let lhs = h_transform(f, grid[i] + grid[j])?;
            let rhs = h[i] + h[j];
            let excess = match (lhs.is_finite(), rhs.is_finite()) {
                (true, true) => lhs - rhs,
                (false, false) => 0.0,
                _ => {
                    skipped += 1;
                    continue;
                }
            };
            if excess > max_excess {
                max_excess = excess;
                arg = (grid[i], grid[j]);
            }
        }
    }
    if skipped > 0 {
        log::debug!("{skipped} pairs with a single infinite side were skipped");
    }
    if max_excess == f64::NEG_INFINITY {
        max_excess = 0.0;
    }
    let fail = max_excess > tolerance;
    Ok(SubadditivityEvidence {
        grid: grid.to_vec(),
        max_excess,
        verdict: if fail { Membership::Fail } else { Membership::Pass },
        witness: fail.then_some(arg),
        tolerance,
        skipped,
    })
}

/// `n` points geometrically spaced over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidGrid);
    }
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let (a, b) = (log(lo), log(hi));
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => exp(a + (b - a) * i as f64 / (n - 1) as f64),
        })
        .collect())
}

/// Verdict against one baseline, with the certificate it rests on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineVerdict {
    pub membership: Membership,
    pub certificate: Option<ConvexityCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub spec: DistributionSpec,
    pub super_pareto: BaselineVerdict,
    pub super_frechet: BaselineVerdict,
    pub super_cauchy: BaselineVerdict,
    pub class_h: Membership,
    pub subadditivity: Option<SubadditivityEvidence>,
    pub config: ClassConfig,
}

impl ClassReport {
    /// `S_P ⊂ S_F ⊂ S_C`: a `Pass` may not be followed by a `Fail`.
    pub fn check_chain(&self) -> Result<()> {
        let chain = [
            ("S_P", self.super_pareto.membership),
            ("S_F", self.super_frechet.membership),
            ("S_C", self.super_cauchy.membership),
        ];
        for w in chain.windows(2) {
            if w[0].1 == Membership::Pass && w[1].1 == Membership::Fail {
                return Err(Error::InternalConsistency(format!(
                    "{} passes but {} fails for {:?}",
                    w[0].0, w[1].0, self.spec
                )));
            }
        }
        Ok(())
    }
}

/// `B ≤_skew F` for baseline `B`, with accuracy failures reported as
/// `Indeterminate`.
pub fn baseline_verdict(f: &DistributionSpec, baseline: Baseline, cfg: &ClassConfig) -> Result<BaselineVerdict> {
    match skew_order_check(&baseline.spec(), f, cfg.u_range, cfg.grid_size, cfg.tolerance) {
        Ok(c) => Ok(BaselineVerdict {
            membership: Membership::from_shape(c.verdict),
            certificate: Some(c),
        }),
        Err(Error::NumericalAccuracy { estimate, target }) => {
            log::warn!("quantile accuracy {estimate:e} missed target {target:e}");
            Ok(BaselineVerdict {
                membership: Membership::Indeterminate,
                certificate: None,
            })
        }
        Err(e) => Err(e),
    }
}

fn not_applicable() -> BaselineVerdict {
    BaselineVerdict {
        membership: Membership::NotApplicable,
        certificate: None,
    }
}

/// Tests `f` against all three baselines and class `H`.
///
/// `S_P`, `S_F` and `H` are only defined for laws on `[0, ∞)`; for other
/// supports they are `NotApplicable`.
pub fn class_membership(f: &DistributionSpec, cfg: &ClassConfig) -> Result<ClassReport> {
    f.validate()?;
    let nonneg = f.is_nonnegative();
    let (super_pareto, super_frechet, class_h, subadditivity) = if nonneg {
        let grid = log_grid(cfg.h_grid.0, cfg.h_grid.1, cfg.h_grid.2)?;
        let ev = subadditivity_check(f, &grid, cfg.tolerance)?;
        (
            baseline_verdict(f, Baseline::Pareto, cfg)?,
            baseline_verdict(f, Baseline::Frechet, cfg)?,
            ev.verdict,
            Some(ev),
        )
    } else {
        (not_applicable(), not_applicable(), Membership::NotApplicable, None)
    };
    let report = ClassReport {
        spec: f.clone(),
        super_pareto,
        super_frechet,
        super_cauchy: baseline_verdict(f, Baseline::Cauchy, cfg)?,
        class_h,
        subadditivity,
        config: *cfg,
    };
    report.check_chain()?;
    Ok(report)
}

/// One row of a conjecture scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// `(α, β)` of the left law; the Cauchy law for the α scan.
    pub left: StableParams,
    pub right: StableParams,
    pub verdict: Shape,
    pub certificate: Option<ConvexityCertificate>,
}

fn scan_cell(
    left: StableParams,
    right: StableParams,
    u_range: (f64, f64),
    grid_size: usize,
    tolerance: f64,
) -> Result<ScanRow> {
    let f = DistributionSpec::Stable(left);
    let g = DistributionSpec::Stable(right);
    match skew_order_check(&f, &g, u_range, grid_size, tolerance) {
        Ok(c) => Ok(ScanRow {
            left,
            right,
            verdict: c.verdict,
            certificate: Some(c),
        }),
        Err(Error::NumericalAccuracy { .. }) => Ok(ScanRow {
            left,
            right,
            verdict: Shape::Indeterminate,
            certificate: None,
        }),
        Err(e) => Err(e),
    }
}

/// For each `α ∈ (0, 1)`, tests `Cauchy ≤_skew S(α, 1)`.
pub fn conjecture_scan_stable(
    alphas: &[f64],
    u_range: (f64, f64),
    grid_size: usize,
    tolerance: f64,
) -> Result<Vec<ScanRow>> {
    alphas
        .iter()
        .map(|&a| {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::param("alpha", a, "in (0, 1)"));
            }
            scan_cell(StableParams::new(1.0, 0.0)?, StableParams::new(a, 1.0)?, u_range, grid_size, tolerance)
        })
        .collect()
}

/// For each `(β₁, β₂)` with `β₁ <= β₂`, tests `S(1, β₁) ≤_skew S(1, β₂)`.
pub fn conjecture_scan_beta(
    beta_pairs: &[(f64, f64)],
    u_range: (f64, f64),
    grid_size: usize,
    tolerance: f64,
) -> Result<Vec<ScanRow>> {
    beta_pairs
        .iter()
        .map(|&(b1, b2)| {
            if !(b1 <= b2) {
                return Err(Error::param("beta2", b2, ">= beta1"));
            }
            scan_cell(StableParams::new(1.0, b1)?, StableParams::new(1.0, b2)?, u_range, grid_size, tolerance)
        })
        .collect()
}
