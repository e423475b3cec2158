//! DOF-to-subdomain membership and the vertex/edge/face partition of the
//! interface.

use std::collections::BTreeMap;

use crate::elements::{DofMap, Location};
use crate::mesh::{face_membership, node_membership, Decomposition, StructuredMesh};

/// Subdomains whose owned elements carry each node and face.
#[derive(Debug, Clone)]
pub struct DofMembership {
    nodes: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
}

impl DofMembership {
    pub fn new(mesh: &StructuredMesh, decomp: &Decomposition) -> Self {
        Self {
            nodes: node_membership(mesh, decomp),
            faces: face_membership(mesh, decomp),
        }
    }

    pub fn of_location(&self, loc: Location) -> &[usize] {
        match loc {
            Location::Node(p) => &self.nodes[p],
            Location::Face(f) => &self.faces[f],
        }
    }

    pub fn of_dof(&self, dofmap: &DofMap, dof: usize) -> &[usize] {
        self.of_location(dofmap.location(dof))
    }

    /// Lowest-index member, used as the unique owner of a DOF.
    pub fn owner(&self, dofmap: &DofMap, dof: usize) -> usize {
        self.of_dof(dofmap, dof)[0]
    }
}

/// Per-DOF membership sets.
pub fn subdomain_dof_membership(
    mesh: &StructuredMesh,
    decomp: &Decomposition,
    dofmap: &DofMap,
) -> Vec<Vec<usize>> {
    let m = DofMembership::new(mesh, decomp);
    (0..dofmap.ndofs())
        .map(|d| m.of_dof(dofmap, d).to_vec())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Vertex,
    Edge,
    Face,
}

#[derive(Debug, Clone)]
pub struct InterfaceClass {
    /// Sorted subdomain set shared by every location of the class.
    pub signature: Vec<usize>,
    pub locations: Vec<Location>,
    /// Unconstrained DOFs at those locations, sorted.
    pub dofs: Vec<usize>,
    pub kind: ClassKind,
}

#[derive(Debug, Clone)]
pub struct InterfacePartition {
    classes: Vec<InterfaceClass>,
    interface: Vec<bool>,
}

impl InterfacePartition {
    pub fn classes(&self) -> &[InterfaceClass] {
        &self.classes
    }

    /// True for unconstrained DOFs shared by two or more subdomains.
    pub fn is_interface(&self, dof: usize) -> bool {
        self.interface[dof]
    }

    pub fn interface_mask(&self) -> &[bool] {
        &self.interface
    }

    pub fn num_interface_dofs(&self) -> usize {
        self.interface.iter().filter(|&&b| b).count()
    }

    /// `(vertices, edges, faces)`.
    pub fn census(&self) -> (usize, usize, usize) {
        let count = |k| self.classes.iter().filter(|c| c.kind == k).count();
        (
            count(ClassKind::Vertex),
            count(ClassKind::Edge),
            count(ClassKind::Face),
        )
    }
}

/// Groups interface locations by membership signature. `constrained`
/// marks Dirichlet DOFs, which are excluded from the interface.
pub fn classify_interface(
    membership: &DofMembership,
    dofmap: &DofMap,
    constrained: &[bool],
) -> InterfacePartition {
    let n = dofmap.ndofs();
    let mut interface = vec![false; n];
    let mut groups: BTreeMap<Vec<usize>, (Vec<Location>, Vec<usize>)> = BTreeMap::new();
    for (dof, flag) in interface.iter_mut().enumerate() {
        if constrained[dof] {
            continue;
        }
        let loc = dofmap.location(dof);
        let sig = membership.of_location(loc);
        if sig.len() < 2 {
            continue;
        }
        *flag = true;
        let entry = groups.entry(sig.to_vec()).or_default();
        // DOFs of one location are numbered contiguously.
        if entry.0.last() != Some(&loc) {
            entry.0.push(loc);
        }
        entry.1.push(dof);
    }
    let classes = groups
        .into_iter()
        .map(|(signature, (mut locations, mut dofs))| {
            locations.sort_unstable();
            dofs.sort_unstable();
            let kind = if signature.len() == 2 {
                ClassKind::Face
            } else if locations.len() == 1 {
                ClassKind::Vertex
            } else {
                ClassKind::Edge
            };
            InterfaceClass {
                signature,
                locations,
                dofs,
                kind,
            }
        })
        .collect();
    InterfacePartition { classes, interface }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{Discretization, ElementPair};
    use crate::mesh::{build_mesh, decompose};

    fn partition(n: usize, dims: [usize; 3], disc: Discretization) -> InterfacePartition {
        let mesh = build_mesh(n, 1.0).unwrap();
        let decomp = decompose(&mesh, dims, 0).unwrap();
        let dm = DofMap::new(&mesh, disc);
        let mem = DofMembership::new(&mesh, &decomp);
        classify_interface(&mem, &dm, &vec![false; dm.ndofs()])
    }

    #[test]
    fn single_subdomain_has_no_interface() {
        let p = partition(4, [1, 1, 1], Discretization::Elasticity);
        assert!(p.classes().is_empty());
        assert_eq!(p.num_interface_dofs(), 0);
    }

    #[test]
    fn two_subdomains_one_face() {
        let p = partition(4, [2, 1, 1], Discretization::Coupled(ElementPair::Q1RT0));
        assert_eq!(p.census(), (0, 0, 1));
    }

    #[test]
    fn eight_subdomains_census() {
        for disc in [
            Discretization::Elasticity,
            Discretization::Coupled(ElementPair::Q1Q1),
            Discretization::Coupled(ElementPair::Q1RT0),
        ] {
            let p = partition(4, [2, 2, 2], disc);
            assert_eq!(p.census(), (1, 6, 12));
        }
    }

    #[test]
    fn constrained_dofs_are_excluded() {
        let mesh = build_mesh(4, 1.0).unwrap();
        let decomp = decompose(&mesh, [2, 1, 1], 0).unwrap();
        let dm = DofMap::new(&mesh, Discretization::Elasticity);
        let mem = DofMembership::new(&mesh, &decomp);
        let all = classify_interface(&mem, &dm, &vec![false; dm.ndofs()]);
        let mut mask = vec![false; dm.ndofs()];
        let first = all.classes()[0].dofs[0];
        mask[first] = true;
        let p = classify_interface(&mem, &dm, &mask);
        assert!(!p.is_interface(first));
        assert_eq!(p.num_interface_dofs(), all.num_interface_dofs() - 1);
    }
}
