//! First level: overlapping subdomain solves with restricted prolongation.

use rayon::prelude::*;

use super::interface::DofMembership;
use crate::elements::DofMap;
use crate::error::Result;
use crate::linalg::{CsrMatrix, Factorization};
use crate::mesh::{Decomposition, StructuredMesh};

#[derive(Debug)]
struct LocalSolver {
    dofs: Vec<usize>,
    /// Local entries written back by the prolongation.
    prolong: Vec<bool>,
    factor: Factorization,
}

#[derive(Debug)]
pub struct FirstLevel {
    n: usize,
    subdomains: Vec<LocalSolver>,
    restricted: bool,
}

/// Sorted DOFs carried by a set of elements.
pub fn element_set_dofs(mesh: &StructuredMesh, dofmap: &DofMap, elements: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; dofmap.ndofs()];
    for &e in elements {
        for d in dofmap.element_dofs(mesh, e) {
            mark[d] = true;
        }
    }
    mark.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(d, _)| d)
        .collect()
}

impl FirstLevel {
    /// Extracts and factorizes `K_i = R_i K R_iᵀ` for every overlapping
    /// subdomain. With `restricted`, each DOF is prolonged only by its
    /// owner (lowest-index member subdomain).
    pub fn build(
        k: &CsrMatrix,
        mesh: &StructuredMesh,
        decomp: &Decomposition,
        dofmap: &DofMap,
        membership: &DofMembership,
        restricted: bool,
    ) -> Result<Self> {
        let subdomains = (0..decomp.num_subdomains())
            .into_par_iter()
            .map(|s| {
                let dofs = element_set_dofs(mesh, dofmap, decomp.overlapping_elements(s));
                let prolong = dofs
                    .iter()
                    .map(|&d| !restricted || membership.owner(dofmap, d) == s)
                    .collect();
                let factor = Factorization::new(&k.submatrix(&dofs, &dofs))?;
                Ok(LocalSolver {
                    dofs,
                    prolong,
                    factor,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: k.nrows(),
            subdomains,
            restricted,
        })
    }

    pub fn num_subdomains(&self) -> usize {
        self.subdomains.len()
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted
    }

    /// Sizes of the local matrices `K_i`.
    pub fn local_sizes(&self) -> Vec<usize> {
        self.subdomains.iter().map(|s| s.dofs.len()).collect()
    }

    pub fn local_dofs(&self, s: usize) -> &[usize] {
        &self.subdomains[s].dofs
    }

    /// `z += Σ_i Ĩ_i K_i⁻¹ R_i r`, summed in subdomain order.
    pub fn apply_add(&self, r: &[f64], z: &mut [f64]) {
        assert_eq!(r.len(), self.n);
        let locals: Vec<Vec<f64>> = self
            .subdomains
            .par_iter()
            .map(|s| {
                let mut x: Vec<f64> = s.dofs.iter().map(|&d| r[d]).collect();
                s.factor.solve_in_place(&mut x);
                x
            })
            .collect();
        for (s, x) in self.subdomains.iter().zip(locals) {
            for ((&d, &p), xi) in s.dofs.iter().zip(&s.prolong).zip(x) {
                if p {
                    z[d] += xi;
                }
            }
        }
    }
}
