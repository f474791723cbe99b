//! The reproduction battery: worked examples from every module, re-derived
//! at run time. Each claim states its result in words.

use std::time::Instant;

use heavytail_core::bounds::{exclusion_check, necessary_bound, Baseline, CdfConstraintSet};
use heavytail_core::classes::{class_membership, subadditivity_check, log_grid, ClassConfig, Membership};
use heavytail_core::orders::{
    convexity_certificate, ks_critical, relative_inverse, skew_order_check, two_sample_ks, Ecdf, Relation, Shape,
};
use heavytail_core::pooling::{deadly_pool_prob, example_construction, stop_loss, DeadlyRiskSpec, PoolConfig};
use heavytail_core::stable_calculus::{d_minus_classify, mix_params, DMinusVerdict, DMinusReason, WeightVector};
use heavytail_core::{DistributionSpec, StableParams};
use serde::Serialize;

use crate::Engine;

/// Run parameters shared by the randomized claims.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BatteryConfig {
    pub seed: u64,
    pub n: usize,
    pub confidence: f64,
    pub grid_size: usize,
    pub tolerance: f64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 100_000,
            confidence: 0.99,
            grid_size: 200,
            tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub config: BatteryConfig,
    pub results: Vec<ClaimResult>,
}

impl BatteryReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let w = self.results.iter().map(|r| r.id.len()).max().unwrap_or(0);
        let mut s = String::new();
        for r in &self.results {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag}  {:w$}  {}\n      {}\n", r.id, r.claim, r.detail));
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        s.push_str(&format!("{passed}/{} claims reproduced\n", self.results.len()));
        s
    }
}

type Check = heavytail_core::Result<(bool, String)>;

struct Claim {
    id: &'static str,
    claim: &'static str,
    run: fn(&Engine, &BatteryConfig) -> Check,
}

fn sp(a: f64, b: f64) -> StableParams {
    StableParams::new(a, b).expect("valid stable parameters")
}

fn uniform2() -> WeightVector {
    WeightVector::uniform(2).expect("two weights")
}

fn example_constraints() -> CdfConstraintSet {
    CdfConstraintSet::new(vec![(2.0, 0.4), (4.0, 0.8)]).expect("valid constraints")
}

fn bound_claim(baseline: Baseline, want: f64) -> Check {
    let b = necessary_bound(baseline, &example_constraints(), 3.0)?;
    Ok(((b - want).abs() <= 5e-4, format!("F(3) >= {b:.6}, expected {want} ± 5e-4")))
}

fn shape_claim(f: DistributionSpec, g: DistributionSpec, cfg: &BatteryConfig, ok: fn(Shape) -> bool) -> Check {
    let c = skew_order_check(&f, &g, (0.01, 0.99), cfg.grid_size, cfg.tolerance)?;
    let min = c.second_differences.iter().copied().fold(f64::INFINITY, f64::min);
    let max = c.second_differences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((ok(c.verdict), format!("{:?}; second differences in [{min:.3e}, {max:.3e}]", c.verdict)))
}

fn dominance_claim(engine: &Engine, spec: DistributionSpec, w: WeightVector, cfg: &BatteryConfig) -> Check {
    let mut pc = PoolConfig::new(spec, w, cfg.n, cfg.seed);
    pc.confidence = cfg.confidence;
    let r = engine.diversification_report(&pc, cfg.grid_size)?;
    let v = &r.verdict;
    Ok((
        v.relation == Relation::LeftDominatedByRight,
        format!(
            "{:?}; max(F_single − F_pool) = {:.4}, max(F_pool − F_single) = {:.4}, band {:.4}",
            v.relation, v.d_plus, v.d_minus, v.band_halfwidth
        ),
    ))
}

const CLAIMS: &[Claim] = &[
    Claim {
        id: "bound-pareto",
        claim: "super-Pareto members with F(2)=0.4, F(4)=0.8 satisfy F(3) >= 0.7",
        run: |_, _| bound_claim(Baseline::Pareto, 0.7),
    },
    Claim {
        id: "bound-frechet",
        claim: "super-Fréchet members with the same constraints satisfy F(3) >= 0.698",
        run: |_, _| bound_claim(Baseline::Frechet, 0.698),
    },
    Claim {
        id: "bound-cauchy",
        claim: "super-Cauchy members with the same constraints satisfy F(3) >= 0.654",
        run: |_, _| bound_claim(Baseline::Cauchy, 0.654),
    },
    Claim {
        id: "bound-exclusion",
        claim: "a law with F(2)=0.4, F(3)=0.6, F(4)=0.8 is not super Pareto",
        run: |_, _| {
            let f = example_construction();
            let v = exclusion_check(&f, Baseline::Pareto, &[2.0, 4.0], &[3.0])?;
            let hit = v.iter().find(|v| v.x == 3.0);
            Ok(match hit {
                Some(v) => (v.cdf < v.bound, format!("F(3) = {} < bound {:.6}", v.cdf, v.bound)),
                None => (false, "no violation found at 3".into()),
            })
        },
    },
    Claim {
        id: "skew-cauchy-frechet",
        claim: "the Cauchy law is less skewed than Fréchet(1): G⁻¹∘F is convex",
        run: |_, c| shape_claim(DistributionSpec::cauchy(), DistributionSpec::frechet(1.0), c, |s| s == Shape::Convex),
    },
    Claim {
        id: "skew-pareto-super-frechet",
        claim: "Pareto(1) is super Fréchet",
        run: |_, c| shape_claim(DistributionSpec::frechet(1.0), DistributionSpec::pareto(1.0), c, |s| s == Shape::Convex),
    },
    Claim {
        id: "skew-abs-cauchy-tail",
        claim: "the absolute Cauchy law is not super Fréchet (concave in the tail)",
        run: |_, c| {
            shape_claim(DistributionSpec::frechet(1.0), DistributionSpec::half_cauchy(), c, |s| {
                matches!(s, Shape::Neither | Shape::Concave)
            })
        },
    },
    Claim {
        id: "skew-abs-cauchy-reverse",
        claim: "the absolute Cauchy law and Fréchet(1) are not skew-ordered",
        run: |_, c| shape_claim(DistributionSpec::half_cauchy(), DistributionSpec::frechet(1.0), c, |s| s == Shape::Neither),
    },
    Claim {
        id: "class-table",
        claim: "Pareto(1) ∈ S_P; Fréchet(1) ∈ S_F ∩ S_C; |Cauchy| ∈ S_C but ∉ S_F and ∉ H",
        run: |_, c| {
            let cfg = ClassConfig {
                grid_size: c.grid_size,
                tolerance: c.tolerance,
                ..ClassConfig::default()
            };
            let p = class_membership(&DistributionSpec::pareto(1.0), &cfg)?;
            let f = class_membership(&DistributionSpec::frechet(1.0), &cfg)?;
            let h = class_membership(&DistributionSpec::half_cauchy(), &cfg)?;
            let ok = p.super_pareto.membership == Membership::Pass
                && f.super_frechet.membership == Membership::Pass
                && f.super_cauchy.membership == Membership::Pass
                && h.super_cauchy.membership == Membership::Pass
                && h.super_frechet.membership == Membership::Fail
                && h.class_h == Membership::Fail;
            Ok((
                ok,
                format!(
                    "Pareto S_P {:?}; Fréchet S_F {:?} S_C {:?}; |Cauchy| S_C {:?} S_F {:?} H {:?}",
                    p.super_pareto.membership,
                    f.super_frechet.membership,
                    f.super_cauchy.membership,
                    h.super_cauchy.membership,
                    h.super_frechet.membership,
                    h.class_h
                ),
            ))
        },
    },
    Claim {
        id: "abs-cauchy-h-witness",
        claim: "h of the absolute Cauchy law fails subadditivity at small x",
        run: |_, c| {
            let ev = subadditivity_check(&DistributionSpec::half_cauchy(), &log_grid(1e-3, 1e2, 100)?, c.tolerance)?;
            Ok(match ev.witness {
                Some((x, y)) => (
                    ev.verdict == Membership::Fail && x + y < 1.0,
                    format!("h(x+y) − h(x) − h(y) = {:.3e} at x = {x:.4e}, y = {y:.4e}", ev.max_excess),
                ),
                None => (false, "no witness".into()),
            })
        },
    },
    Claim {
        id: "cauchy-mix-params",
        claim: "Cauchy pools to Cauchy: γ = 1, δ = 0 for any weights",
        run: |_, _| {
            let mut ok = true;
            for w in [vec![0.5, 0.5], vec![0.3, 0.7], vec![0.2, 0.3, 0.5]] {
                let m = mix_params(sp(1.0, 0.0), &WeightVector::new(w)?)?;
                ok &= m.gamma == 1.0 && m.delta == 0.0;
            }
            Ok((ok, "checked weights (1/2,1/2), (0.3,0.7), (0.2,0.3,0.5)".into()))
        },
    },
    Claim {
        id: "stable-d-minus",
        claim: "S(α,β) ∈ D⁻ iff α = 1, β >= 0 or α < 1, β = 1",
        run: |_, _| {
            let cases = [
                ((1.0, 0.0), DMinusVerdict::InDMinus, DMinusReason::AlphaOneNonnegativeSkew),
                ((0.7, 1.0), DMinusVerdict::InDMinus, DMinusReason::AlphaBelowOneTotallySkewed),
                ((1.2, 1.0), DMinusVerdict::NotInDMinus, DMinusReason::FiniteMean),
                ((1.0, -0.3), DMinusVerdict::NotInDMinus, DMinusReason::NegativeShift),
            ];
            let mut ok = true;
            for ((a, b), v, r) in cases {
                let c = d_minus_classify(sp(a, b))?;
                ok &= c.verdict == v && c.reason == r;
            }
            Ok((ok, "checked (1,0), (0.7,1), (1.2,1), (1,−0.3)".into()))
        },
    },
    Claim {
        id: "stable-shift-mc",
        claim: "pooling S(1,1) shifts the law right by δ (Monte Carlo medians)",
        run: |e, c| {
            let p = sp(1.0, 1.0);
            let spec = DistributionSpec::Stable(p);
            let m = mix_params(p, &uniform2())?;
            let single = Ecdf::new(&e.sample(&spec, c.seed, c.n)?);
            let pooled = Ecdf::new(&e.pool_sample(&PoolConfig::new(spec.clone(), uniform2(), c.n, c.seed))?);
            let shift = pooled.quantile(0.5) - single.quantile(0.5);
            let eps = heavytail_core::orders::band_halfwidth(c.n as f64, c.confidence);
            let width = spec.quantile(0.5 + eps)? - spec.quantile(0.5 - eps)?;
            Ok((
                m.delta > 0.0 && (shift - m.delta).abs() <= 3.0 * width,
                format!("median shift {shift:.4}, δ = {:.4}, band width {width:.4}", m.delta),
            ))
        },
    },
    Claim {
        id: "cauchy-pool-ks",
        claim: "pooled Cauchy risks (0.3, 0.7) have the single-risk law",
        run: |e, c| {
            let spec = DistributionSpec::cauchy();
            let w = WeightVector::new(vec![0.3, 0.7])?;
            let single = Ecdf::new(&e.sample(&spec, c.seed, c.n)?);
            let pooled = Ecdf::new(&e.pool_sample(&PoolConfig::new(spec, w, c.n, c.seed))?);
            let ks = two_sample_ks(&single, &pooled);
            let crit = ks_critical(c.n, c.n, c.confidence);
            Ok((ks < crit, format!("KS = {ks:.5}, critical value {crit:.5}")))
        },
    },
    Claim {
        id: "pareto-nondiversification",
        claim: "for i.i.d. Pareto(1) risks the pool is stochastically larger",
        run: |e, c| dominance_claim(e, DistributionSpec::pareto(1.0), uniform2(), c),
    },
    Claim {
        id: "frechet-nondiversification",
        claim: "for i.i.d. Fréchet(0.8) risks the pool (0.3, 0.7) is stochastically larger",
        run: |e, c| dominance_claim(e, DistributionSpec::frechet(0.8), WeightVector::new(vec![0.3, 0.7])?, c),
    },
    Claim {
        id: "deadly-exact",
        claim: "two deadly risks with p = 0.3 pool to P(Y = ∞) = 1 − 0.7² = 0.51; zero weights do not count",
        run: |_, _| {
            let a = deadly_pool_prob(&DeadlyRiskSpec::new(0.3, uniform2())?)?;
            let b = deadly_pool_prob(&DeadlyRiskSpec::new(0.3, WeightVector::new(vec![0.5, 0.5, 0.0])?)?)?;
            let c = deadly_pool_prob(&DeadlyRiskSpec::new(0.3, WeightVector::new(vec![1.0])?)?)?;
            Ok((a == 0.51 && b == 0.51 && c == 0.3, format!("{a}, {b} (with a zero weight), {c} (single)")))
        },
    },
    Claim {
        id: "deadly-mc",
        claim: "simulated pooled deadly risks are finite with frequency 0.49",
        run: |e, c| {
            let n = 10_000;
            let b = e.pool_sample(&PoolConfig::new(DistributionSpec::deadly(0.3), uniform2(), n, c.seed))?;
            let finite = 1.0 - b.infinite_count() as f64 / n as f64;
            let sigma = (0.49f64 * 0.51 / n as f64).sqrt();
            Ok(((finite - 0.49).abs() <= 3.0 * sigma, format!("finite fraction {finite:.4}, 0.49 ± {:.4}", 3.0 * sigma)))
        },
    },
    Claim {
        id: "example-constraints",
        claim: "the example mixture has F(2) = 0.4, F(4) = 0.8 and an infinite mean",
        run: |_, _| {
            let f = example_construction();
            let (a, b) = (f.cdf(2.0)?, f.cdf(4.0)?);
            let tail = 1.0 - f.cdf(1e12)?;
            Ok((
                (a - 0.4).abs() < 1e-15 && (b - 0.8).abs() < 1e-15 && tail > 1e-13,
                format!("F(2) = {a}, F(4) = {b}, 1 − F(1e12) = {tail:.3e}"),
            ))
        },
    },
    Claim {
        id: "example-pool-048",
        claim: "pooling two copies of the example mixture gives P(Y <= 3) >= 0.48",
        run: |e, c| {
            let n = 10 * c.n;
            let b = e.pool_sample(&PoolConfig::new(example_construction(), uniform2(), n, c.seed))?;
            let p = Ecdf::new(&b).eval(3.0);
            let se = (p * (1.0 - p) / n as f64).sqrt();
            Ok((p >= 0.48 - 0.0015, format!("P(Y <= 3) = {p:.4} ± {se:.4} at n = {n}")))
        },
    },
    Claim {
        id: "cauchy-of-frechet-concave",
        claim: "h(x) = tan(π e^{−1/x} − π/2) is concave",
        run: |_, c| {
            let grid = log_grid(0.01, 100.0, 500)?;
            let r = relative_inverse(&DistributionSpec::frechet(1.0), &DistributionSpec::cauchy(), &grid)?;
            let cert = convexity_certificate(&r.grid, &r.values, Some(&r.errors), c.tolerance)?;
            let max = cert.second_differences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok((
                r.dropped.is_empty() && max <= c.tolerance,
                format!("{:?}; largest second difference {max:.3e}", cert.verdict),
            ))
        },
    },
    Claim {
        id: "pareto-stop-loss",
        claim: "Pareto(1) at t = 4: E(t − X)+ = 3 − ln 4 and pooling lowers it, so Pareto(1) ∉ D⁺",
        run: |e, c| {
            let spec = DistributionSpec::pareto(1.0);
            let exact = 3.0 - 4f64.ln();
            let s = stop_loss(&e.sample(&spec, c.seed, c.n)?, 4.0)?;
            let p = stop_loss(&e.pool_sample(&PoolConfig::new(spec, uniform2(), c.n, c.seed))?, 4.0)?;
            let se = s.std_error.hypot(p.std_error);
            Ok((
                (s.estimate - exact).abs() <= 3.0 * s.std_error && p.estimate < s.estimate - 3.0 * se,
                format!(
                    "single {:.4} ± {:.4} (exact {exact:.4}), pooled {:.4} ± {:.4}",
                    s.estimate, s.std_error, p.estimate, p.std_error
                ),
            ))
        },
    },
];

/// Runs every claim. Errors count as failures.
pub fn reproduce(engine: &Engine, cfg: &BatteryConfig) -> BatteryReport {
    let results = CLAIMS
        .iter()
        .map(|c| {
            let t = Instant::now();
            let (passed, detail) = match (c.run)(engine, cfg) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            ClaimResult {
                id: c.id,
                claim: c.claim,
                passed,
                detail,
                seconds: t.elapsed().as_secs_f64(),
            }
        })
        .collect();
    BatteryReport { config: *cfg, results }
}
