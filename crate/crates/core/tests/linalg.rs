use std::io::BufReader;

use proptest::prelude::*;

use gelswell::linalg::matrix_market::{read_matrix, read_vector, write_matrix, write_vector};
use gelswell::linalg::{gmres, CsrMatrix, FactorKind, Factorization, GmresConfig, GmresStatus, LinearOperator};

struct Exact(Factorization);

impl LinearOperator for Exact {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.0.solve(x));
    }
}

fn dense_mul(a: &[f64], n: usize, m: usize, x: &[f64]) -> Vec<f64> {
    (0..n).map(|i| (0..m).map(|j| a[i * m + j] * x[j]).sum()).collect()
}

fn laplacian_1d(n: usize) -> CsrMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, 2.0));
        if i > 0 {
            t.push((i, i - 1, -1.0));
        }
        if i + 1 < n {
            t.push((i, i + 1, -1.0));
        }
    }
    CsrMatrix::from_triplets(n, n, &t)
}

fn triplets(n: usize) -> impl Strategy<Value = Vec<(usize, usize, f64)>> {
    prop::collection::vec((0..n, 0..n, -10.0..10.0f64), 0..40)
}

proptest! {
    #[test]
    fn spmv_matches_dense(t in triplets(7), x in prop::collection::vec(-5.0..5.0f64, 7)) {
        let a = CsrMatrix::from_triplets(7, 7, &t);
        let y = a.spmv(&x).unwrap();
        let z = dense_mul(&a.to_dense(), 7, 7, &x);
        for (p, q) in y.iter().zip(&z) {
            prop_assert!((p - q).abs() <= 1e-12 * (1.0 + q.abs()));
        }
    }

    #[test]
    fn duplicate_triplets_are_summed(t in triplets(5)) {
        let a = CsrMatrix::from_triplets(5, 5, &t);
        let mut dense = vec![0.0; 25];
        for &(i, j, v) in &t {
            dense[i * 5 + j] += v;
        }
        for (p, q) in a.to_dense().iter().zip(&dense) {
            prop_assert!((p - q).abs() <= 1e-12);
        }
    }

    #[test]
    fn transpose_is_an_involution(t in triplets(6)) {
        let a = CsrMatrix::from_triplets(6, 6, &t);
        prop_assert_eq!(a.transpose().transpose().to_dense(), a.to_dense());
    }

    #[test]
    fn matmul_matches_dense(s in triplets(5), t in triplets(5)) {
        let a = CsrMatrix::from_triplets(5, 5, &s);
        let b = CsrMatrix::from_triplets(5, 5, &t);
        let c = a.matmul(&b).unwrap().to_dense();
        let (da, db) = (a.to_dense(), b.to_dense());
        for i in 0..5 {
            for j in 0..5 {
                let want: f64 = (0..5).map(|k| da[i * 5 + k] * db[k * 5 + j]).sum();
                prop_assert!((c[i * 5 + j] - want).abs() <= 1e-10 * (1.0 + want.abs()));
            }
        }
    }

    #[test]
    fn matrix_market_round_trip(t in triplets(6)) {
        let a = CsrMatrix::from_triplets(6, 6, &t);
        let mut buf = Vec::new();
        write_matrix(&a, &mut buf).unwrap();
        let b = read_matrix(BufReader::new(buf.as_slice())).unwrap();
        prop_assert_eq!(b.to_dense(), a.to_dense());
    }

    #[test]
    fn factorization_solves_diagonally_dominant(t in triplets(8), b in prop::collection::vec(-1.0..1.0f64, 8)) {
        let mut a = CsrMatrix::from_triplets(8, 8, &t);
        let mut extra = Vec::new();
        for i in 0..8 {
            let (_, vals) = a.row(i);
            extra.push((i, i, 1.0 + vals.iter().map(|v| v.abs()).sum::<f64>()));
        }
        let mut all = t.clone();
        all.extend(extra);
        a = CsrMatrix::from_triplets(8, 8, &all);
        let x = Factorization::new(&a).unwrap().solve(&b);
        let r = a.spmv(&x).unwrap();
        for (p, q) in r.iter().zip(&b) {
            prop_assert!((p - q).abs() <= 1e-10);
        }
    }
}

#[test]
fn symmetric_positive_definite_uses_cholesky() {
    let a = laplacian_1d(10);
    assert_eq!(Factorization::new(&a).unwrap().kind(), Some(FactorKind::Cholesky));
}

#[test]
fn gmres_with_exact_preconditioner_takes_one_iteration() {
    let mut t = Vec::new();
    for i in 0..30 {
        t.push((i, i, 4.0));
        t.push((i, (i + 1) % 30, 1.5));
        t.push(((i + 3) % 30, i, -0.7));
    }
    let a = CsrMatrix::from_triplets(30, 30, &t);
    let m = Exact(Factorization::new(&a).unwrap());
    let b: Vec<f64> = (0..30).map(|i| (i as f64).sin()).collect();
    let res = gmres(&a, &m, &b, &GmresConfig::default());
    assert_eq!(res.status, GmresStatus::Converged);
    assert_eq!(res.iterations, 1);
    let r = a.spmv(&res.x).unwrap();
    for (p, q) in r.iter().zip(&b) {
        assert!((p - q).abs() < 1e-12);
    }
}

#[test]
fn gmres_residual_history_is_monotone() {
    let a = laplacian_1d(50);
    let b = vec![1.0; 50];
    let id = gelswell::linalg::IdentityOperator(50);
    let res = gmres(&a, &id, &b, &GmresConfig::default());
    assert!(res.converged());
    assert!(res.residual_history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    assert!(res.relative_residual() <= 1e-8);
}

#[test]
fn vector_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.txt");
    let v = vec![1.5, -2.25e-7, 3.0e12, 0.0];
    write_vector(&v, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_vector(BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(back, v);
}
