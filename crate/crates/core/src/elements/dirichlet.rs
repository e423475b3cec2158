//! Dirichlet constraint table and symmetric elimination.

use crate::bench::load::LoadProgram;
use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;

/// Prescribed value of a constrained DOF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prescribed {
    Fixed(f64),
    /// `scale · program(t)`.
    Program { program: LoadProgram, scale: f64 },
}

impl Prescribed {
    pub fn value(&self, t: f64) -> Result<f64> {
        match self {
            Prescribed::Fixed(v) => Ok(*v),
            Prescribed::Program { program, scale } => Ok(scale * program.value(t)?),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ConstraintTable {
    entries: Vec<Option<Prescribed>>,
    count: usize,
}

impl ConstraintTable {
    pub fn new(ndofs: usize) -> Self {
        Self {
            entries: vec![None; ndofs],
            count: 0,
        }
    }

    pub fn ndofs(&self) -> usize {
        self.entries.len()
    }

    /// Adds a constraint. Re-adding an identical prescription is a no-op;
    /// a different one is rejected.
    pub fn add(&mut self, dof: usize, value: Prescribed) -> Result<()> {
        let expected = self.entries.len();
        let slot = self.entries.get_mut(dof).ok_or(Error::DimensionMismatch {
            expected,
            found: dof,
        })?;
        match slot {
            Some(existing) if *existing == value => Ok(()),
            Some(_) => Err(Error::ConflictingConstraint { dof }),
            None => {
                *slot = Some(value);
                self.count += 1;
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.entries[dof].is_some()
    }

    pub fn get(&self, dof: usize) -> Option<&Prescribed> {
        self.entries[dof].as_ref()
    }

    pub fn mask(&self) -> Vec<bool> {
        self.entries.iter().map(Option::is_some).collect()
    }

    pub fn constrained_dofs(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(d, p)| p.map(|_| d))
    }

    /// `(dof, value)` pairs at time `t`.
    pub fn values_at(&self, t: f64) -> Result<Vec<(usize, f64)>> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(d, p)| p.map(|p| p.value(t).map(|v| (d, v))))
            .collect()
    }

    /// Overwrites the constrained entries of `x` with their values at `t`.
    pub fn impose(&self, x: &mut [f64], t: f64) -> Result<()> {
        for (d, v) in self.values_at(t)? {
            x[d] = v;
        }
        Ok(())
    }

    /// True when every constrained entry of `x` equals its value at `t`.
    pub fn satisfied_by(&self, x: &[f64], t: f64) -> Result<bool> {
        Ok(self.values_at(t)?.iter().all(|&(d, v)| x[d] == v))
    }
}

/// Symmetric elimination of the constraints from `K δ = rhs`, for an
/// increment `δ` about the state `current`.
///
/// Constrained rows become identity rows with right-hand side
/// `prescribed(t) - current`; their columns are moved to the right-hand
/// side of the free rows and zeroed. The sparsity pattern is unchanged.
pub fn apply_dirichlet(
    constraints: &ConstraintTable,
    k: &mut CsrMatrix,
    rhs: &mut [f64],
    current: &[f64],
    t: f64,
) -> Result<()> {
    let n = constraints.ndofs();
    if k.nrows() != n || k.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: k.nrows(),
        });
    }
    if rhs.len() != n || current.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rhs.len().min(current.len()),
        });
    }
    if constraints.is_empty() {
        return Ok(());
    }
    let mut g = vec![0.0; n];
    for (d, v) in constraints.values_at(t)? {
        g[d] = v - current[d];
    }
    for i in 0..n {
        let row_constrained = constraints.is_constrained(i);
        let (cols, vals) = k.row_mut(i);
        let mut has_diag = false;
        let mut shift = 0.0;
        for (&j, v) in cols.iter().zip(vals.iter_mut()) {
            if row_constrained {
                if j == i {
                    *v = 1.0;
                    has_diag = true;
                } else {
                    *v = 0.0;
                }
            } else if constraints.is_constrained(j) {
                shift += *v * g[j];
                *v = 0.0;
            }
        }
        if row_constrained {
            if !has_diag {
                return Err(Error::SingularPivot { row: i });
            }
            rhs[i] = g[i];
        } else {
            rhs[i] -= shift;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_system_unchanged() {
        let mut k = CsrMatrix::from_dense(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let orig = k.clone();
        let mut rhs = vec![1.0, 2.0];
        apply_dirichlet(&ConstraintTable::new(2), &mut k, &mut rhs, &[0.0; 2], 0.0).unwrap();
        assert_eq!(k, orig);
        assert_eq!(rhs, vec![1.0, 2.0]);
    }

    #[test]
    fn all_constrained_gives_identity() {
        let mut k = CsrMatrix::from_dense(3, 3, &[4.0, 1.0, 0.0, 1.0, 4.0, 1.0, 0.0, 1.0, 4.0]);
        let mut c = ConstraintTable::new(3);
        for d in 0..3 {
            c.add(d, Prescribed::Fixed(0.0)).unwrap();
        }
        let mut rhs = vec![5.0, 6.0, 7.0];
        apply_dirichlet(&c, &mut k, &mut rhs, &[0.0; 3], 0.0).unwrap();
        assert_eq!(k.to_dense(), CsrMatrix::identity(3).to_dense());
        assert_eq!(rhs, vec![0.0; 3]);
    }

    #[test]
    fn coupled_two_by_two() {
        // [2 1; 1 2] x = [3, b1] with x0 prescribed to 0.5 from current 0.
        let mut k = CsrMatrix::from_dense(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let mut c = ConstraintTable::new(2);
        c.add(0, Prescribed::Fixed(0.5)).unwrap();
        let mut rhs = vec![3.0, 4.0];
        apply_dirichlet(&c, &mut k, &mut rhs, &[0.0; 2], 0.0).unwrap();
        assert_eq!(k.to_dense(), vec![1.0, 0.0, 0.0, 2.0]);
        assert_eq!(rhs, vec![0.5, 3.5]);
        let x1 = rhs[1] / 2.0;
        assert_eq!(rhs[0], 0.5);
        // Matches the unconstrained second equation 0.5 + 2 x1 = 4.
        assert!((1.0 * 0.5 + 2.0 * x1 - 4.0).abs() < 1e-15);
    }

    #[test]
    fn increment_relative_to_current() {
        let mut k = CsrMatrix::identity(2);
        let mut c = ConstraintTable::new(2);
        c.add(1, Prescribed::Fixed(2.0)).unwrap();
        let mut rhs = vec![0.0, 0.0];
        apply_dirichlet(&c, &mut k, &mut rhs, &[0.0, 1.5], 0.0).unwrap();
        assert_eq!(rhs[1], 0.5);
    }

    #[test]
    fn conflicting_constraint_rejected() {
        let mut c = ConstraintTable::new(2);
        c.add(0, Prescribed::Fixed(0.0)).unwrap();
        c.add(0, Prescribed::Fixed(0.0)).unwrap();
        assert_eq!(c.len(), 1);
        assert!(matches!(
            c.add(0, Prescribed::Fixed(1.0)),
            Err(Error::ConflictingConstraint { dof: 0 })
        ));
    }

    #[test]
    fn program_values() {
        let p = Prescribed::Program {
            program: LoadProgram::punch_default(),
            scale: -1.0,
        };
        assert!((p.value(0.5).unwrap() + 0.2).abs() < 1e-15);
    }
}
