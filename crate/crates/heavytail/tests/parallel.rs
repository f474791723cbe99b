//! Parallel batches must equal the sequential ones bit for bit, whatever the
//! worker count.

use heavytail::parallel::{threads_from_env, THREADS_ENV};
use heavytail::Engine;
use heavytail_core::distributions::sample;
use heavytail_core::pooling::{diversification_report, pool_sample, PoolConfig};
use heavytail_core::rng::BLOCK_LEN;
use heavytail_core::stable_calculus::WeightVector;
use heavytail_core::DistributionSpec;

fn specs() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::pareto(1.0),
        DistributionSpec::stable(0.7, 1.0),
        DistributionSpec::stable(1.0, 0.4),
        DistributionSpec::deadly(0.3),
        heavytail_core::pooling::example_construction(),
    ]
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

#[test]
fn samples_match_the_sequential_core() {
    let engines: Vec<Engine> = [1, 2, 7].into_iter().map(|t| Engine::with_threads(Some(t)).unwrap()).collect();
    for spec in specs() {
        for n in [1, BLOCK_LEN - 1, BLOCK_LEN, 3 * BLOCK_LEN + 17] {
            let want = sample(&spec, 11, n).unwrap();
            for e in &engines {
                let got = e.sample(&spec, 11, n).unwrap();
                assert_eq!(bits(&got.values), bits(&want.values), "{spec:?} n={n} threads={}", e.threads());
                assert_eq!(got.seed, want.seed);
            }
        }
    }
}

#[test]
fn pools_match_the_sequential_core() {
    let engines: Vec<Engine> = [1, 3, 8].into_iter().map(|t| Engine::with_threads(Some(t)).unwrap()).collect();
    for spec in specs() {
        let w = WeightVector::new(vec![0.2, 0.0, 0.5, 0.3]).unwrap();
        let cfg = PoolConfig::new(spec, w, 5 * BLOCK_LEN + 3, 99);
        let want = pool_sample(&cfg).unwrap();
        for e in &engines {
            assert_eq!(bits(&e.pool_sample(&cfg).unwrap().values), bits(&want.values));
        }
    }
}

#[test]
fn reports_match_the_sequential_core() {
    let cfg = PoolConfig::new(DistributionSpec::frechet(0.8), WeightVector::new(vec![0.3, 0.7]).unwrap(), 20_000, 4);
    let want = diversification_report(&cfg, 200).unwrap();
    let got = Engine::with_threads(Some(4)).unwrap().diversification_report(&cfg, 200).unwrap();
    assert_eq!(got, want);
}

#[test]
fn zero_draws_are_rejected() {
    let e = Engine::with_threads(Some(2)).unwrap();
    assert!(e.sample(&DistributionSpec::cauchy(), 0, 0).is_err());
    assert!(e.sample(&DistributionSpec::pareto(-1.0), 0, 10).is_err());
}

#[test]
fn thread_cap_is_read_from_the_environment() {
    std::env::set_var(THREADS_ENV, "3");
    assert_eq!(threads_from_env(), Some(3));
    assert_eq!(Engine::from_env().unwrap().threads(), 3);
    for bad in ["0", "many", ""] {
        std::env::set_var(THREADS_ENV, bad);
        assert_eq!(threads_from_env(), None);
    }
    std::env::remove_var(THREADS_ENV);
    assert_eq!(threads_from_env(), None);
}
