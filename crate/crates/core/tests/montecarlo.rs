mod common;

use common::*;
use rogers_core::fluctuation::{pr_laplace, sup_tail, DEFAULT_EPS_LADDER};
use rogers_core::montecarlo::{
    mc_estimates, shard_count, simulate_shard, simulate_sup_samples, McEstimate, McQuery, SHARD_SIZE,
};
use rogers_core::rogers::RogersSpec;
use rogers_core::wiener_hopf::{bm_drift_spec, Side};
use rogers_core::Error;

fn bm() -> RogersSpec {
    RogersSpec::brownian(0.5, 0.0)
}

fn within(e: &McEstimate, want: f64, k: f64) -> bool {
    (e.mean - want).abs() <= k * e.std_error
}

#[test]
fn pure_drift_supremum_has_mean_drift_over_rate() {
    let s = simulate_sup_samples(&levy(0.0, 1.5, 0.0, &[]), 2.0, 50_000, 1).unwrap();
    let n = s.len() as f64;
    let mean = s.iter().map(|p| p.sup_value).sum::<f64>() / n;
    // sup = 1.5 S with S ~ Exp(2), standard deviation 0.75
    assert!((mean - 0.75).abs() < 4.0 * 0.75 / n.sqrt());
}

#[test]
fn brownian_examples() {
    let seed = 99;
    let s = simulate_sup_samples(&bm(), 0.5, 200_000, seed).unwrap();
    let q = [
        McQuery::Laplace { xi: 1.0 },
        McQuery::Tail { x: 0.0 },
        McQuery::Laplace { xi: 0.0 },
        McQuery::Joint { xi: 1.0, tau: 1.5 },
    ];
    let e = mc_estimates(&s, seed, &q).unwrap();
    assert!(within(&e[0], 0.5, 3.0), "{:?}", e[0]);
    assert_eq!(e[1].mean, 1.0);
    assert_eq!(e[2].mean, 1.0);
    let want = pr_laplace(&bm(), 0.5, 1.5, 1.0, Side::Plus).unwrap().value;
    assert!(within(&e[3], want, 3.0), "{:?} vs {want}", e[3]);
    assert!(e.iter().all(|x| x.n == 200_000 && x.seed == seed));
}

#[test]
fn same_seed_same_samples() {
    let spec = two_sided_cp();
    let a = simulate_sup_samples(&spec, 1.0, 3 * SHARD_SIZE / 2, 5).unwrap();
    let b = simulate_sup_samples(&spec, 1.0, 3 * SHARD_SIZE / 2, 5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn shards_tile_the_sample() {
    let spec = cp_gaussian();
    let n = 2 * SHARD_SIZE + 100;
    let all = simulate_sup_samples(&spec, 1.0, n, 8).unwrap();
    assert_eq!(shard_count(n), 3);
    let mut joined = Vec::new();
    for k in (0..3).rev() {
        let mut part = simulate_shard(&spec, 1.0, n, 8, k).unwrap();
        part.extend(joined);
        joined = part;
    }
    assert_eq!(joined, all);
}

#[test]
fn rejects_what_it_cannot_simulate() {
    assert!(matches!(simulate_sup_samples(&figure("b"), 1.0, 10, 1), Err(Error::Unsupported(_))));
    assert!(simulate_sup_samples(&bm(), 0.0, 10, 1).is_err());
    assert!(matches!(mc_estimates(&[], 1, &[McQuery::Laplace { xi: 1.0 }]), Err(Error::Argument(_))));
}

#[test]
fn standard_error_shrinks_like_root_n() {
    let q = [McQuery::Laplace { xi: 1.0 }];
    let small = simulate_sup_samples(&bm(), 0.5, 50_000, 3).unwrap();
    let large = simulate_sup_samples(&bm(), 0.5, 100_000, 3).unwrap();
    let r = mc_estimates(&small, 3, &q).unwrap()[0].std_error / mc_estimates(&large, 3, &q).unwrap()[0].std_error;
    assert!((1.30..=1.52).contains(&r), "{r}");
}

#[test]
fn empirical_tail_is_nonincreasing() {
    let s = simulate_sup_samples(&two_sided_cp(), 1.0, 20_000, 4).unwrap();
    let q: Vec<McQuery> = (0..40).map(|k| McQuery::Tail { x: 0.1 * k as f64 }).collect();
    let e = mc_estimates(&s, 4, &q).unwrap();
    assert!(e.windows(2).all(|w| w[1].mean <= w[0].mean));
}

#[test]
fn transforms_match_the_analytic_values() {
    let seed = 77;
    for spec in [bm_drift_spec(-0.4, 0.0), two_sided_cp(), cp_gaussian(), levy(0.2, 0.1, 0.3, &[(1.0, 1.0)])] {
        let s = simulate_sup_samples(&spec, 1.0, 100_000, seed).unwrap();
        for xi in [0.5, 1.0, 2.0] {
            let e = mc_estimates(&s, seed, &[McQuery::Laplace { xi }]).unwrap()[0];
            let want = pr_laplace(&spec, 1.0, 0.0, xi, Side::Plus).unwrap().value;
            assert!(within(&e, want, 3.5), "xi={xi}: {e:?} vs {want}");
        }
    }
}

#[test]
fn tails_match_stieltjes_inversion() {
    let seed = 12;
    for spec in [two_sided_cp(), cp_gaussian()] {
        let s = simulate_sup_samples(&spec, 1.0, 100_000, seed).unwrap();
        for x in [0.3, 1.0, 2.0] {
            let e = mc_estimates(&s, seed, &[McQuery::Tail { x }]).unwrap()[0];
            let want = sup_tail(&spec, 1.0, x, &DEFAULT_EPS_LADDER).unwrap().value;
            assert!((e.mean - want).abs() <= 3.5 * e.std_error + 1e-3, "x={x}: {e:?} vs {want}");
        }
    }
}
