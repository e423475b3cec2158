//! Two-level overlapping Schwarz preconditioner
//!
//! ```text
//! M⁻¹ = Φ K₀⁻¹ Φᵀ + Σ_i Ĩ_i K_i⁻¹ R_i
//! ```
//!
//! with restricted (owner-only) prolongations `Ĩ_i` on the first level and
//! an algebraic GDSW or RGDSW coarse space.

pub mod coarse;
pub mod first_level;
pub mod interface;

use crate::elements::DofMap;
use crate::error::Result;
use crate::linalg::{CsrMatrix, LinearOperator};
use crate::mesh::{Decomposition, StructuredMesh};

pub use coarse::{
    gdsw_interface_basis, nullspace_component, rgdsw_interface_basis, CoarseSpace,
    InterfaceBasis,
};
pub use first_level::FirstLevel;
pub use interface::{
    classify_interface, subdomain_dof_membership, ClassKind, DofMembership, InterfaceClass,
    InterfacePartition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoarseMode {
    None,
    Gdsw,
    Rgdsw,
}

impl CoarseMode {
    pub fn name(self) -> &'static str {
        match self {
            CoarseMode::None => "none",
            CoarseMode::Gdsw => "gdsw",
            CoarseMode::Rgdsw => "rgdsw",
        }
    }
}

impl std::str::FromStr for CoarseMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(CoarseMode::None),
            "gdsw" => Ok(CoarseMode::Gdsw),
            "rgdsw" => Ok(CoarseMode::Rgdsw),
            other => Err(format!("unknown coarse mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NullspaceMode {
    /// Constant vector on all DOFs.
    Algebraic,
    /// Unit translations of the deformation components.
    Translations3,
    /// Unit vectors of the 3 deformation and 3 flux components (Q1Q1).
    Translations6,
}

impl NullspaceMode {
    pub fn name(self) -> &'static str {
        match self {
            NullspaceMode::Algebraic => "algebraic",
            NullspaceMode::Translations3 => "translations3",
            NullspaceMode::Translations6 => "translations6",
        }
    }
}

impl std::str::FromStr for NullspaceMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "algebraic" => Ok(NullspaceMode::Algebraic),
            "translations3" => Ok(NullspaceMode::Translations3),
            "translations6" => Ok(NullspaceMode::Translations6),
            other => Err(format!("unknown nullspace mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchwarzConfig {
    pub coarse: CoarseMode,
    pub nullspace: NullspaceMode,
    /// Restricted (owner-only) first-level prolongation.
    pub restricted: bool,
}

impl Default for SchwarzConfig {
    fn default() -> Self {
        Self {
            coarse: CoarseMode::Gdsw,
            nullspace: NullspaceMode::Algebraic,
            restricted: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SchwarzStats {
    pub coarse_dim: usize,
    pub local_sizes: Vec<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl SchwarzStats {
    pub fn max_local_size(&self) -> usize {
        self.local_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn avg_local_size(&self) -> f64 {
        if self.local_sizes.is_empty() {
            0.0
        } else {
            self.local_sizes.iter().sum::<usize>() as f64 / self.local_sizes.len() as f64
        }
    }
}

#[derive(Debug)]
pub struct SchwarzPreconditioner {
    n: usize,
    first: FirstLevel,
    coarse: Option<CoarseSpace>,
    stats: SchwarzStats,
}

impl SchwarzPreconditioner {
    /// Builds both levels from the constrained matrix `k`.
    pub fn build(
        k: &CsrMatrix,
        mesh: &StructuredMesh,
        decomp: &Decomposition,
        dofmap: &DofMap,
        constrained: &[bool],
        config: &SchwarzConfig,
    ) -> Result<Self> {
        let membership = DofMembership::new(mesh, decomp);
        let first = FirstLevel::build(k, mesh, decomp, dofmap, &membership, config.restricted)?;
        let partition = classify_interface(&membership, dofmap, constrained);
        let (vertices, edges, faces) = partition.census();
        let coarse = match config.coarse {
            CoarseMode::None => None,
            mode => Some(CoarseSpace::build(
                k,
                &partition,
                &membership,
                dofmap,
                constrained,
                decomp.num_subdomains(),
                mode,
                config.nullspace,
            )?),
        };
        let stats = SchwarzStats {
            coarse_dim: coarse.as_ref().map_or(0, CoarseSpace::dim),
            local_sizes: first.local_sizes(),
            vertices,
            edges,
            faces,
        };
        Ok(Self {
            n: k.nrows(),
            first,
            coarse,
            stats,
        })
    }

    pub fn stats(&self) -> &SchwarzStats {
        &self.stats
    }

    pub fn coarse(&self) -> Option<&CoarseSpace> {
        self.coarse.as_ref()
    }

    pub fn first_level(&self) -> &FirstLevel {
        &self.first
    }
}

impl LinearOperator for SchwarzPreconditioner {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.iter_mut().for_each(|v| *v = 0.0);
        if let Some(c) = &self.coarse {
            c.apply_add(r, z);
        }
        self.first.apply_add(r, z);
    }
}
