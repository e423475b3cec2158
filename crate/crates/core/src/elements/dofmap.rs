//! Global degree-of-freedom numbering.
//!
//! * Elasticity: 3 displacement components per node, `3p + c`.
//! * Q1Q1: node-interleaved, node `p` owns `6p..6p+6` (3 deformation then
//!   3 flux components).
//! * Q1RT0: blocked, all `3·nnodes` deformation DOFs first (`3p + c`), then
//!   one normal-flux DOF per mesh face.
//!
//! Face DOFs carry the flux along the global face normal, which points
//! along `+axis` on interior faces and outward on the boundary.

use crate::mesh::StructuredMesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementPair {
    Q1Q1,
    Q1RT0,
}

impl ElementPair {
    pub fn name(self) -> &'static str {
        match self {
            ElementPair::Q1Q1 => "q1q1",
            ElementPair::Q1RT0 => "q1rt0",
        }
    }

    /// Flux DOFs per element.
    pub fn flux_dofs_per_element(self) -> usize {
        match self {
            ElementPair::Q1Q1 => 24,
            ElementPair::Q1RT0 => 6,
        }
    }
}

impl std::str::FromStr for ElementPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "q1q1" => Ok(ElementPair::Q1Q1),
            "q1rt0" => Ok(ElementPair::Q1RT0),
            other => Err(format!("unknown element pair '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Discretization {
    /// Displacement-only Q1 elasticity.
    Elasticity,
    /// Deformation plus solvent flux.
    Coupled(ElementPair),
}

impl Discretization {
    pub fn dofs_per_element(self) -> usize {
        match self {
            Discretization::Elasticity => 24,
            Discretization::Coupled(p) => 24 + p.flux_dofs_per_element(),
        }
    }

    pub fn pair(self) -> Option<ElementPair> {
        match self {
            Discretization::Elasticity => None,
            Discretization::Coupled(p) => Some(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DofKind {
    /// Deformation component 0..3.
    Deformation(usize),
    /// Nodal flux component 0..3 (Q1Q1).
    NodalFlux(usize),
    /// Normal flux through a face (RT0).
    FaceFlux,
}

impl DofKind {
    pub fn is_deformation(self) -> bool {
        matches!(self, DofKind::Deformation(_))
    }
}

/// Geometric carrier of a DOF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Location {
    Node(usize),
    Face(usize),
}

/// Closed-form DOF counts for an `n³` element grid.
pub fn dof_count(n: usize, disc: Discretization) -> usize {
    let nodes = (n + 1).pow(3);
    match disc {
        Discretization::Elasticity => 3 * nodes,
        Discretization::Coupled(ElementPair::Q1Q1) => 6 * nodes,
        Discretization::Coupled(ElementPair::Q1RT0) => 3 * nodes + 3 * n * n * (n + 1),
    }
}

#[derive(Debug, Clone)]
pub struct DofMap {
    disc: Discretization,
    num_nodes: usize,
    num_faces: usize,
    ndofs: usize,
}

impl DofMap {
    pub fn new(mesh: &StructuredMesh, disc: Discretization) -> Self {
        let num_nodes = mesh.num_nodes();
        let num_faces = mesh.num_faces();
        let ndofs = match disc {
            Discretization::Elasticity => 3 * num_nodes,
            Discretization::Coupled(ElementPair::Q1Q1) => 6 * num_nodes,
            Discretization::Coupled(ElementPair::Q1RT0) => 3 * num_nodes + num_faces,
        };
        Self {
            disc,
            num_nodes,
            num_faces,
            ndofs,
        }
    }

    pub fn discretization(&self) -> Discretization {
        self.disc
    }

    pub fn ndofs(&self) -> usize {
        self.ndofs
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_faces(&self) -> usize {
        self.num_faces
    }

    pub fn deformation_dof(&self, node: usize, c: usize) -> usize {
        match self.disc {
            Discretization::Coupled(ElementPair::Q1Q1) => 6 * node + c,
            _ => 3 * node + c,
        }
    }

    /// Nodal flux DOF (Q1Q1 only).
    pub fn nodal_flux_dof(&self, node: usize, c: usize) -> Option<usize> {
        match self.disc {
            Discretization::Coupled(ElementPair::Q1Q1) => Some(6 * node + 3 + c),
            _ => None,
        }
    }

    /// Face flux DOF (Q1RT0 only).
    pub fn face_dof(&self, face: usize) -> Option<usize> {
        match self.disc {
            Discretization::Coupled(ElementPair::Q1RT0) => Some(3 * self.num_nodes + face),
            _ => None,
        }
    }

    pub fn kind(&self, dof: usize) -> DofKind {
        match self.disc {
            Discretization::Elasticity => DofKind::Deformation(dof % 3),
            Discretization::Coupled(ElementPair::Q1Q1) => {
                let c = dof % 6;
                if c < 3 {
                    DofKind::Deformation(c)
                } else {
                    DofKind::NodalFlux(c - 3)
                }
            }
            Discretization::Coupled(ElementPair::Q1RT0) => {
                if dof < 3 * self.num_nodes {
                    DofKind::Deformation(dof % 3)
                } else {
                    DofKind::FaceFlux
                }
            }
        }
    }

    pub fn location(&self, dof: usize) -> Location {
        match self.disc {
            Discretization::Elasticity => Location::Node(dof / 3),
            Discretization::Coupled(ElementPair::Q1Q1) => Location::Node(dof / 6),
            Discretization::Coupled(ElementPair::Q1RT0) => {
                if dof < 3 * self.num_nodes {
                    Location::Node(dof / 3)
                } else {
                    Location::Face(dof - 3 * self.num_nodes)
                }
            }
        }
    }

    /// True for deformation DOFs, false for flux DOFs.
    pub fn deformation_mask(&self) -> Vec<bool> {
        (0..self.ndofs)
            .map(|d| self.kind(d).is_deformation())
            .collect()
    }

    /// Global DOFs of element `e` in local order: 24 deformation entries
    /// (`3a + c`), then the flux entries (`3a + c` for Q1Q1, one per local
    /// face for RT0).
    pub fn element_dofs(&self, mesh: &StructuredMesh, e: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.disc.dofs_per_element());
        let nodes = mesh.element_nodes(e);
        for &p in nodes {
            for c in 0..3 {
                out.push(self.deformation_dof(p, c));
            }
        }
        match self.disc {
            Discretization::Elasticity => {}
            Discretization::Coupled(ElementPair::Q1Q1) => {
                for &p in nodes {
                    for c in 0..3 {
                        out.push(6 * p + 3 + c);
                    }
                }
            }
            Discretization::Coupled(ElementPair::Q1RT0) => {
                for &f in mesh.element_faces(e) {
                    out.push(3 * self.num_nodes + f);
                }
            }
        }
        out
    }
}

/// Sign relating the local outward flux of element `e` through local face
/// `j` to the global face DOF.
pub fn element_face_signs(mesh: &StructuredMesh, e: usize) -> [f64; 6] {
    let mut s = [0.0; 6];
    for (j, &f) in mesh.element_faces(e).iter().enumerate() {
        let outward = if j % 2 == 1 { 1.0 } else { -1.0 };
        s[j] = outward * mesh.face(f).normal_sign();
    }
    s
}

pub fn build_dofmap(mesh: &StructuredMesh, disc: Discretization) -> DofMap {
    DofMap::new(mesh, disc)
}
