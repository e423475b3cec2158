//! Restarted GMRES with right preconditioning.
//!
//! Solves `A M⁻¹ y = b`, `x = M⁻¹ y`, from `x₀ = 0`. Because the
//! preconditioner is applied on the right, the Arnoldi residual estimate is
//! the residual of the original system.

use super::sparse::{dot, norm2, CsrMatrix};

/// A square linear map applied out of place.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y).expect("operator dimension mismatch");
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}

/// The identity, i.e. no preconditioning.
#[derive(Debug, Clone, Copy)]
pub struct IdentityOperator(pub usize);

impl LinearOperator for IdentityOperator {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresConfig {
    pub rel_tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_iter: 1000,
            restart: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmresStatus {
    Converged,
    /// The Krylov space became invariant before the tolerance was met.
    Breakdown,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct GmresResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `‖r_k‖` for k = 0..=iterations.
    pub residual_history: Vec<f64>,
    pub status: GmresStatus,
}

impl GmresResult {
    pub fn converged(&self) -> bool {
        self.status == GmresStatus::Converged
    }

    pub fn relative_residual(&self) -> f64 {
        let r0 = self.residual_history[0];
        if r0 == 0.0 {
            0.0
        } else {
            self.residual_history.last().copied().unwrap_or(0.0) / r0
        }
    }
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}

/// Right-preconditioned restarted GMRES (modified Gram-Schmidt, Givens
/// rotations).
pub fn gmres<A, M>(a: &A, m: &M, b: &[f64], config: &GmresConfig) -> GmresResult
where
    A: LinearOperator + ?Sized,
    M: LinearOperator + ?Sized,
{
    let n = b.len();
    assert_eq!(a.dim(), n, "operator dimension mismatch");
    assert_eq!(m.dim(), n, "preconditioner dimension mismatch");
    let restart = config.restart.max(1);

    let mut x = vec![0.0; n];
    let r0 = norm2(b);
    let mut history = vec![r0];
    if r0 == 0.0 {
        return GmresResult {
            x,
            iterations: 0,
            residual_history: history,
            status: GmresStatus::Converged,
        };
    }
    let target = config.rel_tol * r0;

    let mut iterations = 0;
    let mut r = b.to_vec();
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n];

    loop {
        let beta = norm2(&r);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(restart + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(restart);
        let mut cs: Vec<(f64, f64)> = Vec::with_capacity(restart);
        let mut g = vec![0.0; restart + 1];
        g[0] = beta;
        let mut status = None;
        let mut k = 0;

        while k < restart && iterations < config.max_iter {
            m.apply(&basis[k], &mut z);
            a.apply(&z, &mut w);
            let mut col = vec![0.0; k + 2];
            for (j, vj) in basis.iter().enumerate() {
                let hj = dot(&w, vj);
                col[j] = hj;
                w.iter_mut().zip(vj).for_each(|(wi, vi)| *wi -= hj * vi);
            }
            let hnext = norm2(&w);
            col[k + 1] = hnext;
            for (j, &(c, s)) in cs.iter().enumerate() {
                let (a0, a1) = (col[j], col[j + 1]);
                col[j] = c * a0 + s * a1;
                col[j + 1] = -s * a0 + c * a1;
            }
            let (c, s) = givens(col[k], col[k + 1]);
            col[k] = c * col[k] + s * col[k + 1];
            col[k + 1] = 0.0;
            g[k + 1] = -s * g[k];
            g[k] *= c;
            cs.push((c, s));
            h.push(col);
            k += 1;
            iterations += 1;
            let res = g[k].abs();
            history.push(res);

            if res <= target {
                status = Some(GmresStatus::Converged);
                break;
            }
            if hnext <= f64::EPSILON * r0 {
                status = Some(GmresStatus::Breakdown);
                break;
            }
            basis.push(w.iter().map(|v| v / hnext).collect());
        }

        // Back substitution for the least-squares coefficients.
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[j][i] * y[j];
            }
            y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
        }
        let mut update = vec![0.0; n];
        for (yi, vi) in y.iter().zip(&basis) {
            update.iter_mut().zip(vi).for_each(|(u, v)| *u += yi * v);
        }
        m.apply(&update, &mut z);
        x.iter_mut().zip(&z).for_each(|(xi, zi)| *xi += zi);

        let final_status = match status {
            Some(s) => Some(s),
            None if iterations >= config.max_iter => Some(GmresStatus::MaxIterations),
            None => None,
        };
        if let Some(status) = final_status {
            return GmresResult {
                x,
                iterations,
                residual_history: history,
                status,
            };
        }

        // Restart from the true residual.
        a.apply(&x, &mut w);
        r.iter_mut()
            .zip(b.iter().zip(&w))
            .for_each(|(ri, (bi, wi))| *ri = bi - wi);
        let rn = norm2(&r);
        if let Some(last) = history.last_mut() {
            *last = rn;
        }
        if rn <= target {
            return GmresResult {
                x,
                iterations,
                residual_history: history,
                status: GmresStatus::Converged,
            };
        }
    }
}
