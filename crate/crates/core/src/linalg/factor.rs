//! Sparse direct factorization backed by `faer`'s supernodal solvers.
//!
//! Symmetric inputs are first attempted with a sparse Cholesky (`LLᵀ`,
//! AMD-ordered); on a non-positive pivot, or for unsymmetric inputs, a
//! sparse LU with partial pivoting is used.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::LuError;
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{Mat, Side};

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Relative symmetry defect below which Cholesky is attempted.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Cholesky,
    Lu,
}

enum Inner {
    Empty,
    Cholesky(faer::sparse::linalg::solvers::Llt<usize, f64>),
    Lu(faer::sparse::linalg::solvers::Lu<usize, f64>),
}

pub struct Factorization {
    n: usize,
    inner: Inner,
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Factorization")
            .field("n", &self.n)
            .field("kind", &self.kind())
            .finish()
    }
}

struct Csc {
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

fn to_csc(a: &CsrMatrix) -> Csc {
    // The CSR arrays of Aᵀ are the CSC arrays of A.
    let t = a.transpose();
    Csc {
        col_ptr: t.row_ptr().to_vec(),
        row_idx: t.col_idx().to_vec(),
        values: t.values().to_vec(),
    }
}

impl Factorization {
    /// Factorizes `a`, choosing Cholesky when it is symmetric positive
    /// definite and LU otherwise.
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        Self::check_square(a)?;
        let scale = a.max_abs();
        if a.symmetry_defect() <= SYMMETRY_TOL * scale {
            if let Ok(f) = Self::build(a, FactorKind::Cholesky) {
                return Ok(f);
            }
        }
        Self::build(a, FactorKind::Lu)
    }

    /// LU with partial pivoting regardless of symmetry.
    pub fn lu(a: &CsrMatrix) -> Result<Self> {
        Self::check_square(a)?;
        Self::build(a, FactorKind::Lu)
    }

    fn check_square(a: &CsrMatrix) -> Result<()> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        for i in 0..a.nrows() {
            let (_, vals) = a.row(i);
            if vals.iter().all(|&v| v == 0.0) {
                return Err(Error::SingularPivot { row: i });
            }
        }
        Ok(())
    }

    fn build(a: &CsrMatrix, kind: FactorKind) -> Result<Self> {
        let n = a.nrows();
        if n == 0 {
            return Ok(Self {
                n,
                inner: Inner::Empty,
            });
        }
        let csc = to_csc(a);
        let symbolic = SymbolicSparseColMatRef::new_checked(n, n, &csc.col_ptr, None, &csc.row_idx);
        let mat = SparseColMatRef::new(symbolic, &csc.values);
        let inner = match kind {
            FactorKind::Cholesky => Inner::Cholesky(
                mat.sp_cholesky(Side::Lower)
                    .map_err(|e| Error::Factorization(format!("{e:?}")))?,
            ),
            FactorKind::Lu => Inner::Lu(mat.sp_lu().map_err(|e| match e {
                LuError::SymbolicSingular { index } => Error::SingularPivot { row: index },
                other => Error::Factorization(format!("{other:?}")),
            })?),
        };
        let f = Self { n, inner };
        if kind == FactorKind::Lu {
            f.check_numeric(a)?;
        }
        Ok(f)
    }

    /// Zero pivots in the LU show up as non-finite solutions; probe with
    /// `A * 1` and report the first bad row.
    fn check_numeric(&self, a: &CsrMatrix) -> Result<()> {
        let ones = vec![1.0; self.n];
        let mut b = a.spmv(&ones)?;
        self.solve_in_place(&mut b);
        match b.iter().position(|v| !v.is_finite()) {
            Some(row) => Err(Error::SingularPivot { row }),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Option<FactorKind> {
        match self.inner {
            Inner::Empty => None,
            Inner::Cholesky(_) => Some(FactorKind::Cholesky),
            Inner::Lu(_) => Some(FactorKind::Lu),
        }
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n, "right-hand side has wrong length");
        if self.n == 0 {
            return;
        }
        let mut rhs = Mat::<f64>::from_fn(self.n, 1, |i, _| b[i]);
        self.solve_mat(&mut rhs);
        for (i, bi) in b.iter_mut().enumerate() {
            *bi = rhs[(i, 0)];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Solves for several right-hand sides stored as the columns of `rhs`.
    pub fn solve_mat(&self, rhs: &mut Mat<f64>) {
        assert_eq!(rhs.nrows(), self.n, "right-hand side has wrong length");
        match &self.inner {
            Inner::Empty => {}
            Inner::Cholesky(f) => f.solve_in_place(rhs.as_mut()),
            Inner::Lu(f) => f.solve_in_place(rhs.as_mut()),
        }
    }
}

pub fn factorize(a: &CsrMatrix) -> Result<Factorization> {
    Factorization::new(a)
}
