//! GDSW and RGDSW coarse spaces.
//!
//! Interface values `Φ_Γ` are restrictions of nullspace vectors to
//! interface classes (GDSW) or multiplicity-weighted combinations attached
//! to maximal classes (RGDSW). Interior values are discrete harmonic
//! extensions `Φ_I = −K_II⁻¹ K_IΓ Φ_Γ`, computed per non-overlapping
//! subdomain.

use faer::Mat;
use rayon::prelude::*;

use super::interface::{DofMembership, InterfacePartition};
use super::{CoarseMode, NullspaceMode};
use crate::elements::{Discretization, DofKind, DofMap, ElementPair};
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, Factorization};

/// Index of the nullspace vector containing `dof`, if any.
pub fn nullspace_component(dofmap: &DofMap, mode: NullspaceMode, dof: usize) -> Option<usize> {
    match (mode, dofmap.kind(dof)) {
        (NullspaceMode::Algebraic, _) => Some(0),
        (_, DofKind::Deformation(c)) => Some(c),
        (NullspaceMode::Translations6, DofKind::NodalFlux(c)) => Some(3 + c),
        _ => None,
    }
}

pub fn nullspace_dimension(mode: NullspaceMode) -> usize {
    match mode {
        NullspaceMode::Algebraic => 1,
        NullspaceMode::Translations3 => 3,
        NullspaceMode::Translations6 => 6,
    }
}

pub fn check_nullspace(dofmap: &DofMap, mode: NullspaceMode) -> Result<()> {
    if mode == NullspaceMode::Translations6
        && dofmap.discretization() != Discretization::Coupled(ElementPair::Q1Q1)
    {
        return Err(Error::InvalidParameter(
            "translations6 needs the Q1Q1 node-interleaved layout".into(),
        ));
    }
    Ok(())
}

/// Interface part of the coarse basis: sparse columns and the nullspace
/// component of each column.
#[derive(Debug, Clone, Default)]
pub struct InterfaceBasis {
    pub columns: Vec<Vec<(usize, f64)>>,
    pub components: Vec<usize>,
}

/// Dofs of each class split by nullspace component.
fn class_component_dofs(
    partition: &InterfacePartition,
    dofmap: &DofMap,
    mode: NullspaceMode,
) -> Vec<Vec<Vec<usize>>> {
    let ncomp = nullspace_dimension(mode);
    partition
        .classes()
        .iter()
        .map(|c| {
            let mut by = vec![Vec::new(); ncomp];
            for &d in &c.dofs {
                if let Some(u) = nullspace_component(dofmap, mode, d) {
                    by[u].push(d);
                }
            }
            by
        })
        .collect()
}

/// One column per (class, nullspace vector) with nonempty support.
pub fn gdsw_interface_basis(
    partition: &InterfacePartition,
    dofmap: &DofMap,
    mode: NullspaceMode,
) -> InterfaceBasis {
    let split = class_component_dofs(partition, dofmap, mode);
    let mut out = InterfaceBasis::default();
    for by in &split {
        for (u, dofs) in by.iter().enumerate() {
            if !dofs.is_empty() {
                out.columns.push(dofs.iter().map(|&d| (d, 1.0)).collect());
                out.components.push(u);
            }
        }
    }
    out
}

fn is_superset(a: &[usize], b: &[usize]) -> bool {
    // Both sorted.
    let mut i = 0;
    for &x in b {
        while i < a.len() && a[i] < x {
            i += 1;
        }
        if i == a.len() || a[i] != x {
            return false;
        }
    }
    true
}

/// Reduced basis: per nullspace vector, coarse functions sit on the
/// maximal classes (no other supporting class has a strictly larger
/// signature); every class is shared equally among the maximal classes
/// whose signature contains its own.
pub fn rgdsw_interface_basis(
    partition: &InterfacePartition,
    dofmap: &DofMap,
    mode: NullspaceMode,
) -> InterfaceBasis {
    let classes = partition.classes();
    let split = class_component_dofs(partition, dofmap, mode);
    let mut out = InterfaceBasis::default();
    for u in 0..nullspace_dimension(mode) {
        let support: Vec<usize> = (0..classes.len()).filter(|&c| !split[c][u].is_empty()).collect();
        let maximal: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&c| {
                !support.iter().any(|&o| {
                    o != c
                        && classes[o].signature.len() > classes[c].signature.len()
                        && is_superset(&classes[o].signature, &classes[c].signature)
                })
            })
            .collect();
        let ancestors: Vec<Vec<usize>> = support
            .iter()
            .map(|&e| {
                maximal
                    .iter()
                    .copied()
                    .filter(|&c| is_superset(&classes[c].signature, &classes[e].signature))
                    .collect()
            })
            .collect();
        for &c in &maximal {
            let mut col = Vec::new();
            for (&e, anc) in support.iter().zip(&ancestors) {
                if anc.contains(&c) {
                    let w = 1.0 / anc.len() as f64;
                    col.extend(split[e][u].iter().map(|&d| (d, w)));
                }
            }
            col.sort_unstable_by_key(|&(d, _)| d);
            out.columns.push(col);
            out.components.push(u);
        }
    }
    out
}

#[derive(Debug)]
pub struct CoarseSpace {
    mode: CoarseMode,
    phi: CsrMatrix,
    phi_t: CsrMatrix,
    components: Vec<usize>,
    interior: Vec<Vec<usize>>,
    k0: Option<Factorization>,
}

impl CoarseSpace {
    /// Builds `Φ` and factorizes `K₀ = ΦᵀKΦ`. `k` must already carry the
    /// Dirichlet elimination; constrained rows of `Φ` are zero.
    pub fn build(
        k: &CsrMatrix,
        partition: &InterfacePartition,
        membership: &DofMembership,
        dofmap: &DofMap,
        constrained: &[bool],
        num_subdomains: usize,
        mode: CoarseMode,
        nullspace: NullspaceMode,
    ) -> Result<Self> {
        check_nullspace(dofmap, nullspace)?;
        let basis = match mode {
            CoarseMode::Gdsw => gdsw_interface_basis(partition, dofmap, nullspace),
            CoarseMode::Rgdsw => rgdsw_interface_basis(partition, dofmap, nullspace),
            CoarseMode::None => InterfaceBasis::default(),
        };
        let n = dofmap.ndofs();
        let nc = basis.columns.len();

        let mut interior = vec![Vec::new(); num_subdomains];
        for d in 0..n {
            if constrained[d] {
                continue;
            }
            let m = membership.of_dof(dofmap, d);
            if m.len() == 1 {
                interior[m[0]].push(d);
            }
        }

        let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
        for (j, col) in basis.columns.iter().enumerate() {
            triplets.extend(col.iter().map(|&(d, v)| (d, j, v)));
        }
        let phi_gamma = CsrMatrix::from_triplets(n, nc, &triplets);

        if nc > 0 {
            // Columns of K restricted to Γ, keeping global numbering.
            let gamma_map: Vec<usize> = (0..n)
                .map(|d| if partition.is_interface(d) { d } else { usize::MAX })
                .collect();
            let blocks: Vec<Vec<(usize, usize, f64)>> = interior
                .par_iter()
                .map(|idx| harmonic_extension(k, &phi_gamma, idx, &gamma_map))
                .collect::<Result<_>>()?;
            for b in blocks {
                triplets.extend(b);
            }
        }
        let phi = CsrMatrix::from_triplets(n, nc, &triplets);
        let phi_t = phi.transpose();
        let k0 = if nc > 0 {
            let k0 = phi_t.matmul(&k.matmul(&phi)?)?;
            Some(Factorization::new(&k0)?)
        } else {
            None
        };
        Ok(Self {
            mode,
            phi,
            phi_t,
            components: basis.components,
            interior,
            k0,
        })
    }

    pub fn mode(&self) -> CoarseMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.phi.ncols()
    }

    pub fn phi(&self) -> &CsrMatrix {
        &self.phi
    }

    /// Nullspace vector index of each coarse column.
    pub fn components(&self) -> &[usize] {
        &self.components
    }

    /// Unconstrained DOFs interior to each subdomain.
    pub fn interior_dofs(&self, s: usize) -> &[usize] {
        &self.interior[s]
    }

    /// `z += Φ K₀⁻¹ Φᵀ r`.
    pub fn apply_add(&self, r: &[f64], z: &mut [f64]) {
        let Some(k0) = &self.k0 else {
            return;
        };
        let mut y = self.phi_t.spmv(r).expect("coarse restriction size");
        k0.solve_in_place(&mut y);
        for i in 0..self.phi.nrows() {
            let (cols, vals) = self.phi.row(i);
            z[i] += cols.iter().zip(vals).map(|(&c, &v)| v * y[c]).sum::<f64>();
        }
    }
}

/// Interior rows of the coarse basis for one subdomain.
fn harmonic_extension(
    k: &CsrMatrix,
    phi_gamma: &CsrMatrix,
    idx: &[usize],
    gamma_map: &[usize],
) -> Result<Vec<(usize, usize, f64)>> {
    if idx.is_empty() {
        return Ok(Vec::new());
    }
    let k_ig = k.submatrix_with_map(idx, k.ncols(), gamma_map);
    let b = k_ig.matmul(phi_gamma)?;
    let mut used: Vec<usize> = b.col_idx().to_vec();
    used.sort_unstable();
    used.dedup();
    if used.is_empty() {
        return Ok(Vec::new());
    }
    let mut slot = vec![usize::MAX; phi_gamma.ncols()];
    for (l, &c) in used.iter().enumerate() {
        slot[c] = l;
    }
    let mut rhs = Mat::<f64>::zeros(idx.len(), used.len());
    for i in 0..idx.len() {
        let (cols, vals) = b.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            rhs[(i, slot[c])] = -v;
        }
    }
    let k_ii = k.submatrix(idx, idx);
    Factorization::new(&k_ii)?.solve_mat(&mut rhs);
    let mut out = Vec::new();
    for (l, &c) in used.iter().enumerate() {
        for (i, &d) in idx.iter().enumerate() {
            let v = rhs[(i, l)];
            if v != 0.0 {
                out.push((d, c, v));
            }
        }
    }
    Ok(out)
}
