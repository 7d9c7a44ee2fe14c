mod common;

use nalgebra::{DMatrix, SymmetricEigen};
use opbound::{symmetric_eigenvalues, SymOperator, SymOperatorF32};
use proptest::prelude::*;

fn nalgebra_eigenvalues(op: &SymOperator<f64>) -> Vec<f64> {
    let m = DMatrix::from_row_slice(op.dim(), op.dim(), op.as_slice());
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

fn naive_square(op: &SymOperator<f64>) -> Vec<f64> {
    let d = op.dim();
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out[i * d + j] += op.get(i, k) * op.get(k, j);
            }
        }
    }
    out
}

#[test]
fn eigenvalues_match_nalgebra() {
    let mut rng = common::rng(11);
    for dim in 1..=24 {
        for _ in 0..5 {
            let op = common::random_symmetric(dim, &mut rng);
            let ours = op.eigenvalues().unwrap();
            let theirs = nalgebra_eigenvalues(&op);
            let scale = op.op_norm().unwrap().max(1.0);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() <= 1e-9 * scale, "dim {dim}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn low_rank_and_clustered_spectra() {
    let mut rng = common::rng(12);
    for dim in [5usize, 40, 120] {
        let q = common::random_rotation(dim, &mut rng);
        let mut v = vec![0.0; dim];
        v[0] = 1.0;
        v[1] = 1.0;
        v[2] = 1e-12;
        let op = common::rotate_diagonal(&q, &v);
        let ev = op.eigenvalues().unwrap();
        let mut want = v.clone();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}

#[test]
fn square_matches_naive_product() {
    let mut rng = common::rng(13);
    for dim in 1..=10 {
        let op = common::random_symmetric(dim, &mut rng);
        let sq = op.square();
        for (a, b) in sq.as_slice().iter().zip(naive_square(&op)) {
            assert!((a - b).abs() < 1e-13);
        }
        let frob: f64 = op.as_slice().iter().map(|x| x * x).sum();
        assert!((op.trace_of_square() - frob).abs() < 1e-12);
        assert!((sq.trace() - frob).abs() < 1e-12);
    }
}

#[test]
fn f32_agrees_with_f64() {
    let mut rng = common::rng(14);
    let op = common::random_symmetric(6, &mut rng);
    let single: Vec<f32> = op.as_slice().iter().map(|&x| x as f32).collect();
    let op32 = SymOperatorF32::from_row_major(6, single).unwrap();
    let a = op.eigenvalues().unwrap();
    let b = op32.eigenvalues().unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - *y as f64).abs() < 1e-5);
    }
}

#[test]
fn rejects_asymmetric_input() {
    assert!(SymOperator::from_row_major(2, vec![1.0, 0.5, 0.4, 1.0]).is_err());
    let nearly = SymOperator::from_row_major(2, vec![1.0, 0.5, 0.5 + 1e-12, 1.0]).unwrap();
    assert_eq!(nearly.get(0, 1), nearly.get(1, 0));
    assert!(SymOperator::from_row_major(2, vec![1.0, f64::NAN, f64::NAN, 1.0]).is_err());
    assert!(symmetric_eigenvalues(&[1.0f64, 2.0, 3.0], 2).is_err());
}

proptest! {
    #[test]
    fn two_by_two_closed_form(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0) {
        let op = SymOperator::from_rows(&[vec![a, b], vec![b, c]]).unwrap();
        let ev = op.eigenvalues().unwrap();
        let mid = (a + c) / 2.0;
        let rad = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        let tol = 1e-12 * (1.0 + mid.abs() + rad);
        prop_assert!((ev[0] - (mid - rad)).abs() <= tol);
        prop_assert!((ev[1] - (mid + rad)).abs() <= tol);
        prop_assert!((op.op_norm().unwrap() - (mid.abs() + rad)).abs() <= tol);
    }

    #[test]
    fn trace_equals_eigenvalue_sum(seed in any::<u64>(), dim in 1usize..12) {
        let mut rng = common::rng(seed);
        let op = common::random_symmetric(dim, &mut rng);
        let s: f64 = op.eigenvalues().unwrap().iter().sum();
        prop_assert!((s - op.trace()).abs() < 1e-10);
    }

    #[test]
    fn norm_is_subadditive_and_homogeneous(seed in any::<u64>(), dim in 1usize..8, s in -3.0f64..3.0) {
        let mut rng = common::rng(seed);
        let a = common::random_symmetric(dim, &mut rng);
        let b = common::random_symmetric(dim, &mut rng);
        let sum = a.try_add(&b).unwrap();
        let (na, nb) = (a.op_norm().unwrap(), b.op_norm().unwrap());
        prop_assert!(sum.op_norm().unwrap() <= na + nb + 1e-12);
        prop_assert!((a.scale(s).op_norm().unwrap() - s.abs() * na).abs() < 1e-10);
    }
}
