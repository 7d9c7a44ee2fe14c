mod common;

use opbound::{
    build_first_order, DiagonalBatch, PairedSequences, PairedStats, SampleBatch, SymOperator, VarianceProxies,
};
use proptest::prelude::*;
use rand::Rng;

fn random_psd_batch(seed: u64, n: usize, dim: usize) -> SampleBatch<f64> {
    // rank-one and rank-two PSD items with trace at most 1
    let mut rng = common::rng(seed);
    let items = (0..n)
        .map(|_| {
            let q = common::random_rotation(dim, &mut rng);
            let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let s: f64 = v.iter().sum::<f64>().max(1.0);
            v.iter_mut().for_each(|x| *x /= s);
            common::rotate_diagonal(&q, &v)
        })
        .collect();
    SampleBatch::new(items, 1.0, 1.0, true).unwrap()
}

fn max_diff(a: &SymOperator<f64>, b: &SymOperator<f64>) -> f64 {
    a.max_abs_diff(b).unwrap()
}

#[test]
fn first_order_mean_is_unbiased_for_variance() {
    let a = common::polynomial_profile(3);
    let mut rng = common::rng(31);
    let batch = common::uniform_diagonal(&a, 400_000, &mut rng);
    let stats = batch.stats().unwrap();
    let sigma = stats.sigma_n.unwrap().diag();
    let sigma_prime = stats.sigma_n_prime.unwrap().diag();
    let var = common::uniform_variance(&a);
    let var_prime = common::uniform_var_xprime(&a);
    let m = (batch.len() / 2) as f64;
    for i in 0..3 {
        // MC standard error of the mean of ½(u − v)² is √(7/720) a² / √m
        let se = var_prime[i].sqrt() / m.sqrt();
        assert!((sigma[i] - var[i]).abs() < 4.0 * se, "coordinate {i}");
        assert!((sigma_prime[i] - var_prime[i]).abs() < 0.05 * var_prime[i], "coordinate {i}");
    }
}

#[test]
fn diagonal_path_matches_dense_path() {
    let mut rng = common::rng(32);
    for n in [8usize, 13, 64, 203] {
        let a = [1.0, 0.5, 0.2, 0.05];
        let coords = common::uniform_coords(&a, n, &mut rng);
        let diag = DiagonalBatch::new(coords, 4, 1.0, 4.0, true).unwrap();
        let dense = SampleBatch::new(diag.to_dense(), 1.0, 4.0, true).unwrap();
        let s1 = diag.stats().unwrap();
        let s2 = PairedStats::dense(&dense).unwrap();
        assert_eq!(s1.n_used, s2.n_used);
        assert_eq!(s1.discarded, s2.discarded);
        for (x, y) in s1.z.values().iter().zip(s2.z.values()) {
            assert!((x - y).abs() < 1e-14);
        }
        for (x, y) in s1.z_prime.values().iter().zip(s2.z_prime.values()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((s1.sigma_n_norm - s2.sigma_n_norm).abs() < 1e-14);
        assert!(max_diff(s1.sigma_n.as_ref().unwrap(), s2.sigma_n.as_ref().unwrap()) < 1e-14);
        let p1 = VarianceProxies::compute(&s1, 0.01, 0.01).unwrap();
        let p2 = VarianceProxies::compute(&s2, 0.01, 0.01).unwrap();
        assert!((p1.sigma_u_sq - p2.sigma_u_sq).abs() < 1e-13);
        assert!((p1.tau_u - p2.tau_u).abs() < 1e-13);
    }
}

#[test]
fn proxies_cover_population_quantities() {
    let a = common::polynomial_profile(3);
    let var = common::uniform_variance(&a);
    let (trace, norm) = (var.iter().sum::<f64>(), var[0]);
    let (trials, delta) = (200, 0.05);
    let mut hits = [0usize; 4];
    for t in 0..trials {
        let mut rng = common::rng(1000 + t);
        let stats = common::uniform_diagonal(&a, 2000, &mut rng).stats().unwrap();
        let p = VarianceProxies::compute(&stats, delta, delta).unwrap();
        hits[0] += (p.tau_u >= trace) as usize;
        hits[1] += (p.tau_l <= trace) as usize;
        hits[2] += (p.sigma_u_sq >= norm) as usize;
        hits[3] += (p.sigma_l_sq <= norm) as usize;
    }
    for h in hits {
        assert!(h as f64 >= 0.95 * trials as f64, "{hits:?}");
    }
}

#[test]
fn proxies_tighten_with_n() {
    let a = common::polynomial_profile(3);
    let var = common::uniform_variance(&a);
    let trace: f64 = var.iter().sum();
    let mut rng = common::rng(33);
    let mut prev = f64::INFINITY;
    for n in [1_000usize, 10_000, 100_000, 1_000_000] {
        let stats = common::uniform_diagonal(&a, n, &mut rng).stats().unwrap();
        let p = VarianceProxies::compute(&stats, 0.05, 0.05).unwrap();
        let gap = (p.sigma_u_sq - var[0]).max(p.tau_u - trace);
        assert!(gap < prev);
        prev = gap;
    }
    assert!(prev < 0.05 * var[0]);
}

#[test]
fn determinism() {
    let a = random_psd_batch(7, 40, 3);
    let b = random_psd_batch(7, 40, 3);
    let sa = PairedStats::dense(&a).unwrap();
    let sb = PairedStats::dense(&b).unwrap();
    assert_eq!(sa.z, sb.z);
    assert_eq!(sa.z_prime, sb.z_prime);
    assert_eq!(sa.sigma_n_norm, sb.sigma_n_norm);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn auxiliary_bounds_hold(seed in any::<u64>(), n in 4usize..40, dim in 1usize..5) {
        let batch = random_psd_batch(seed, n, dim);
        let paired = PairedSequences::from_batch(&batch).unwrap();
        let (c, b) = (batch.c(), batch.b());
        for x in &paired.x_prime {
            let ev = x.eigenvalues().unwrap();
            prop_assert!(ev[0] >= -1e-12);
            prop_assert!(x.trace() <= 2.0 * b + 1e-12);
            prop_assert!(ev[ev.len() - 1] <= 2.0 * c * c + 1e-12);
        }
        for x in &paired.x_double_prime {
            prop_assert!(x.eigenvalues().unwrap()[0] >= -1e-12);
            prop_assert!(x.trace() <= 4.0 * b * c * c + 1e-12);
        }
        prop_assert_eq!(paired.n_used % 4, 0);
        prop_assert_eq!(paired.n_used + paired.discarded, n);
        prop_assert_eq!(build_first_order(&batch).unwrap().len(), n / 2);
    }

    #[test]
    fn proxy_ordering_chain(seed in any::<u64>(), n in 8usize..80) {
        let batch = random_psd_batch(seed, n, 3);
        let stats = PairedStats::dense(&batch).unwrap();
        let p = VarianceProxies::compute(&stats, 0.05, 0.05).unwrap();
        prop_assert!(p.tau_l <= p.trace_sigma_n && p.trace_sigma_n <= p.tau_u);
        prop_assert!(p.sigma_l_sq <= p.sigma_n_norm && p.sigma_n_norm <= p.sigma_u_sq);
        prop_assert!(p.sigma_l_sq >= 0.0);
    }

    #[test]
    fn proxies_are_scale_equivariant(seed in any::<u64>(), n in 8usize..60, s in 0.1f64..3.0) {
        let batch = random_psd_batch(seed, n, 2);
        let scaled_items = batch.items().iter().map(|x| x.scale(s)).collect();
        let scaled = SampleBatch::new(scaled_items, s, s * s, true).unwrap();
        let p = VarianceProxies::compute(&PairedStats::dense(&batch).unwrap(), 0.05, 0.05).unwrap();
        let q = VarianceProxies::compute(&PairedStats::dense(&scaled).unwrap(), 0.05, 0.05).unwrap();
        let s2 = s * s;
        let close = |x: f64, y: f64| (x * s2 - y).abs() <= 1e-10 * (1.0 + y.abs());
        prop_assert!(close(p.tau_u, q.tau_u));
        prop_assert!(close(p.tau_l, q.tau_l));
        prop_assert!(close(p.sigma_u_sq, q.sigma_u_sq));
        prop_assert!(close(p.sigma_l_sq, q.sigma_l_sq));
        prop_assert!((p.tau_u_prime * s2 * s2 - q.tau_u_prime).abs() <= 1e-10 * (1.0 + q.tau_u_prime));
    }

    #[test]
    fn proxies_widen_as_delta_shrinks(seed in any::<u64>(), n in 8usize..60) {
        let stats = PairedStats::dense(&random_psd_batch(seed, n, 2)).unwrap();
        let loose = VarianceProxies::compute(&stats, 0.1, 0.1).unwrap();
        let tight = VarianceProxies::compute(&stats, 0.01, 0.01).unwrap();
        prop_assert!(tight.tau_u > loose.tau_u);
        prop_assert!(tight.tau_l < loose.tau_l);
        prop_assert!(tight.sigma_u_sq > loose.sigma_u_sq);
        prop_assert!(tight.sigma_l_sq <= loose.sigma_l_sq);
    }
}
