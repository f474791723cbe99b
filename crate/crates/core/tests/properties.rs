use heavytail_core::bounds::{necessary_bound, Baseline, CdfConstraintSet};
use heavytail_core::distributions::{sample, ConvexMap};
use heavytail_core::orders::{relative_inverse, skew_order_check};
use heavytail_core::pooling::{pool_sample, PoolConfig};
use heavytail_core::stable_calculus::{mix_params, WeightVector};
use heavytail_core::{DistributionSpec, StableParams};
use proptest::prelude::*;

fn closed_form() -> impl Strategy<Value = DistributionSpec> {
    prop_oneof![
        (0.2f64..4.0).prop_map(DistributionSpec::pareto),
        (0.2f64..4.0).prop_map(DistributionSpec::frechet),
        Just(DistributionSpec::cauchy()),
        Just(DistributionSpec::half_cauchy()),
        (-5.0f64..5.0, 0.1f64..10.0).prop_map(|(lo, w)| DistributionSpec::uniform(lo, lo + w)),
    ]
}

fn affine() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..20.0, -10.0f64..10.0)
}

fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 2..=max_len).prop_map(|v| {
        let s: f64 = v.iter().sum();
        let mut w: Vec<f64> = v.iter().map(|x| x / s).collect();
        let head: f64 = w[1..].iter().sum();
        w[0] = 1.0 - head;
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantile_round_trip(spec in closed_form()) {
        for k in 1..100 {
            let u = k as f64 / 100.0;
            let x = spec.quantile(u).unwrap();
            prop_assert!((spec.cdf(x).unwrap() - u).abs() <= 1e-9, "u={} x={}", u, x);
        }
    }

    #[test]
    fn generalized_inverse_property(spec in closed_form(), u in 0.001f64..0.999) {
        let x = spec.quantile(u).unwrap();
        prop_assert!(spec.cdf(x).unwrap() >= u - 1e-15);
    }

    #[test]
    fn scaling_equivariance_is_exact(spec in closed_form(), (a, b) in affine(), x in -50.0f64..50.0) {
        let scaled = spec.clone().scaled(a, b);
        prop_assert_eq!(scaled.cdf(x).unwrap(), spec.cdf((x - b) / a).unwrap());
    }

    #[test]
    fn relative_inverse_is_nondecreasing(f in closed_form(), g in closed_form(), raw in prop::collection::vec(-20.0f64..60.0, 3..40)) {
        let mut grid = raw;
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let r = relative_inverse(&f, &g, &grid).unwrap();
        prop_assert!(r.values.windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(r.grid.len() + r.dropped.len(), grid.len());
    }

    #[test]
    fn relative_inverse_with_itself_is_identity(f in closed_form(), us in prop::collection::vec(0.001f64..0.999, 3..30)) {
        let mut grid: Vec<f64> = us.iter().map(|&u| f.quantile(u).unwrap()).collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let r = relative_inverse(&f, &f, &grid).unwrap();
        for (x, y) in r.grid.iter().zip(&r.values) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{} vs {}", x, y);
        }
    }

    #[test]
    fn stable_cdf_is_monotone(alpha in 0.3f64..2.0, beta in -1.0f64..1.0, x in -30.0f64..30.0, dx in 0.0f64..5.0) {
        let p = StableParams::new(alpha, beta).unwrap();
        let lo = heavytail_core::distributions::stable_cdf(p, x).unwrap();
        let hi = heavytail_core::distributions::stable_cdf(p, x + dx).unwrap();
        prop_assert!(hi >= lo - 1e-12);
        prop_assert!((0.0..=1.0).contains(&lo));
    }

    #[test]
    fn gamma_grows_when_a_weight_is_split(alpha in 0.05f64..0.999, w in weights(6), pick in 0usize..6) {
        let p = StableParams::new(alpha, 1.0).unwrap();
        let i = pick % w.len();
        let mut split = w.clone();
        let half = split[i] / 2.0;
        split[i] = half;
        split.push(half);
        let before = mix_params(p, &WeightVector::new(w).unwrap()).unwrap().gamma;
        let after = mix_params(p, &WeightVector::new(split).unwrap()).unwrap().gamma;
        prop_assert!(after > before);
        prop_assert!(before > 1.0);
    }

    #[test]
    fn shift_has_the_sign_of_beta(beta in -1.0f64..1.0, w in weights(5)) {
        let d = mix_params(StableParams::new(1.0, beta).unwrap(), &WeightVector::new(w).unwrap()).unwrap();
        prop_assert_eq!(d.gamma, 1.0);
        if beta > 0.0 { prop_assert!(d.delta > 0.0); }
        if beta < 0.0 { prop_assert!(d.delta < 0.0); }
        if beta == 0.0 { prop_assert_eq!(d.delta, 0.0); }
    }

    #[test]
    fn bounds_are_ordered_by_class(q in 2.0f64..=4.0) {
        let c = CdfConstraintSet::new(vec![(2.0, 0.4), (4.0, 0.8)]).unwrap();
        let p = necessary_bound(Baseline::Pareto, &c, q).unwrap();
        let f = necessary_bound(Baseline::Frechet, &c, q).unwrap();
        let k = necessary_bound(Baseline::Cauchy, &c, q).unwrap();
        prop_assert!(p >= f - 1e-6 && f >= k - 1e-6, "{} {} {}", p, f, k);
    }

    #[test]
    fn raising_a_constraint_never_lowers_the_bound(
        p1 in 0.05f64..0.5, gap in 0.05f64..0.45, bump in 0.0f64..0.04, which in 0usize..2, t in 0.01f64..0.99,
        baseline in prop_oneof![Just(Baseline::Pareto), Just(Baseline::Frechet), Just(Baseline::Cauchy)],
    ) {
        let p2 = p1 + gap;
        let base = CdfConstraintSet::new(vec![(2.0, p1), (4.0, p2)]).unwrap();
        let raised = if which == 0 {
            CdfConstraintSet::new(vec![(2.0, (p1 + bump).min(p2 - 1e-3)), (4.0, p2)]).unwrap()
        } else {
            CdfConstraintSet::new(vec![(2.0, p1), (4.0, (p2 + bump).min(0.999))]).unwrap()
        };
        let q = 2.0 + 2.0 * t;
        let b0 = necessary_bound(baseline, &base, q).unwrap();
        let b1 = necessary_bound(baseline, &raised, q).unwrap();
        prop_assert!(b1 >= b0 - 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convexity_verdict_is_affine_invariant((a, b) in affine(), pair in 0usize..4) {
        let pairs = [
            (DistributionSpec::cauchy(), DistributionSpec::frechet(1.0)),
            (DistributionSpec::frechet(1.0), DistributionSpec::half_cauchy()),
            (DistributionSpec::frechet(1.0), DistributionSpec::pareto(1.0)),
            (DistributionSpec::pareto(1.0), DistributionSpec::frechet(1.0)),
        ];
        let (f, g) = &pairs[pair];
        let plain = skew_order_check(f, g, (0.01, 0.99), 120, 1e-7).unwrap();
        let moved = skew_order_check(&f.clone().scaled(a, b), g, (0.01, 0.99), 120, 1e-7).unwrap();
        prop_assert_eq!(plain.verdict, moved.verdict);
    }

    #[test]
    fn pooling_is_permutation_invariant(w in weights(5), seed in any::<u64>(), rot in 0usize..5) {
        let spec = DistributionSpec::pareto(0.8);
        let mut permuted = w.clone();
        let k = rot % w.len();
        permuted.rotate_left(k);
        permuted.reverse();
        let a = pool_sample(&PoolConfig::new(spec.clone(), WeightVector::new(w).unwrap(), 3000, seed)).unwrap();
        let b = pool_sample(&PoolConfig::new(spec, WeightVector::new(permuted).unwrap(), 3000, seed)).unwrap();
        prop_assert_eq!(a.values, b.values);
    }

    #[test]
    fn sampling_is_reproducible(spec in closed_form(), seed in any::<u64>(), n in 1usize..10_000) {
        let a = sample(&spec, seed, n).unwrap();
        let b = sample(&spec, seed, n).unwrap();
        prop_assert_eq!(a.values.len(), n);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn convex_map_specs_round_trip(c in -2.0f64..2.0, u in 0.01f64..0.99, alpha in 0.3f64..1.0) {
        let base = DistributionSpec::frechet(alpha);
        for map in [ConvexMap::XExpX, ConvexMap::HingePlusIdentity { c }] {
            let t = base.clone().transformed(map);
            let x = t.quantile(u).unwrap();
            if x.is_finite() {
                prop_assert!((t.cdf(x).unwrap() - u).abs() < 1e-9);
            }
        }
    }
}
