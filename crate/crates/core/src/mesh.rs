//! Structured hexahedral meshes of the cube `[0, L]^3` and box decompositions.
//!
//! Nodes are numbered lexicographically with `x` fastest:
//! `node(i, j, k) = i + (n + 1) * (j + (n + 1) * k)`; elements likewise with
//! `n` per axis. Faces are numbered axis by axis (all faces normal to `x`
//! first), and each face carries a global normal: `+axis` for interior faces
//! (from the lower-index to the higher-index element) and outward on the
//! boundary.

use std::collections::BTreeSet;
use std::io::Write;

use crate::error::{Error, Result};

/// Offsets of the 8 element vertices in `{0,1}^3`, in the local ordering
/// used throughout the crate.
pub const HEX_VERTEX_OFFSETS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

/// Boundary plane of the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryPlane {
    X1Min,
    X2Min,
    X3Min,
    X1Max,
    X2Max,
    X3Max,
}

impl BoundaryPlane {
    pub const ALL: [BoundaryPlane; 6] = [
        BoundaryPlane::X1Min,
        BoundaryPlane::X2Min,
        BoundaryPlane::X3Min,
        BoundaryPlane::X1Max,
        BoundaryPlane::X2Max,
        BoundaryPlane::X3Max,
    ];

    pub fn axis(self) -> usize {
        match self {
            BoundaryPlane::X1Min | BoundaryPlane::X1Max => 0,
            BoundaryPlane::X2Min | BoundaryPlane::X2Max => 1,
            BoundaryPlane::X3Min | BoundaryPlane::X3Max => 2,
        }
    }

    pub fn is_max(self) -> bool {
        matches!(
            self,
            BoundaryPlane::X1Max | BoundaryPlane::X2Max | BoundaryPlane::X3Max
        )
    }

    pub fn from_axis(axis: usize, max: bool) -> Self {
        match (axis, max) {
            (0, false) => BoundaryPlane::X1Min,
            (1, false) => BoundaryPlane::X2Min,
            (2, false) => BoundaryPlane::X3Min,
            (0, true) => BoundaryPlane::X1Max,
            (1, true) => BoundaryPlane::X2Max,
            (2, true) => BoundaryPlane::X3Max,
            _ => panic!("axis out of range"),
        }
    }

    /// Outward unit normal.
    pub fn normal(self) -> [f64; 3] {
        let mut n = [0.0; 3];
        n[self.axis()] = if self.is_max() { 1.0 } else { -1.0 };
        n
    }
}

/// A mesh face. `elements[0]` is the element on the lower side of the face
/// along `axis`, `elements[1]` the one on the upper side.
#[derive(Debug, Clone)]
pub struct Face {
    pub axis: usize,
    pub elements: [Option<usize>; 2],
    pub nodes: [usize; 4],
    pub boundary: Option<BoundaryPlane>,
}

impl Face {
    /// Sign of the global face normal relative to `+axis`.
    pub fn normal_sign(&self) -> f64 {
        match self.boundary {
            Some(plane) if !plane.is_max() => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StructuredMesh {
    n: usize,
    length: f64,
    coords: Vec<[f64; 3]>,
    elements: Vec<[usize; 8]>,
    faces: Vec<Face>,
    /// Local face order: `-x, +x, -y, +y, -z, +z`.
    element_faces: Vec<[usize; 6]>,
}

impl StructuredMesh {
    pub fn new(n_per_axis: usize, length: f64) -> Result<Self> {
        if n_per_axis == 0 {
            return Err(Error::InvalidMesh("n_per_axis must be positive".into()));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidMesh(format!(
                "edge length must be positive, got {length}"
            )));
        }
        let n = n_per_axis;
        let np = n + 1;
        let h = length / n as f64;

        let mut coords = Vec::with_capacity(np * np * np);
        for k in 0..np {
            for j in 0..np {
                for i in 0..np {
                    coords.push([i as f64 * h, j as f64 * h, k as f64 * h]);
                }
            }
        }

        let node = |i: usize, j: usize, k: usize| i + np * (j + np * k);
        let mut elements = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let mut conn = [0; 8];
                    for (a, off) in HEX_VERTEX_OFFSETS.iter().enumerate() {
                        conn[a] = node(i + off[0], j + off[1], k + off[2]);
                    }
                    elements.push(conn);
                }
            }
        }

        let element = |i: usize, j: usize, k: usize| i + n * (j + n * k);
        let mut faces = Vec::with_capacity(3 * n * n * (n + 1));
        let mut element_faces = vec![[usize::MAX; 6]; n * n * n];
        for axis in 0..3 {
            // (p, q, r): p along `axis`, (q, r) the two transverse axes.
            for r in 0..n {
                for q in 0..n {
                    for p in 0..=n {
                        let ijk = |p: usize, q: usize, r: usize| -> [usize; 3] {
                            match axis {
                                0 => [p, q, r],
                                1 => [q, p, r],
                                _ => [q, r, p],
                            }
                        };
                        let lower = (p > 0).then(|| {
                            let c = ijk(p - 1, q, r);
                            element(c[0], c[1], c[2])
                        });
                        let upper = (p < n).then(|| {
                            let c = ijk(p, q, r);
                            element(c[0], c[1], c[2])
                        });
                        let corners = [
                            ijk(p, q, r),
                            ijk(p, q + 1, r),
                            ijk(p, q + 1, r + 1),
                            ijk(p, q, r + 1),
                        ];
                        let nodes = corners.map(|c| node(c[0], c[1], c[2]));
                        let boundary = if p == 0 {
                            Some(BoundaryPlane::from_axis(axis, false))
                        } else if p == n {
                            Some(BoundaryPlane::from_axis(axis, true))
                        } else {
                            None
                        };
                        let id = faces.len();
                        if let Some(e) = lower {
                            element_faces[e][2 * axis + 1] = id;
                        }
                        if let Some(e) = upper {
                            element_faces[e][2 * axis] = id;
                        }
                        faces.push(Face {
                            axis,
                            elements: [lower, upper],
                            nodes,
                            boundary,
                        });
                    }
                }
            }
        }

        Ok(Self {
            n,
            length,
            coords,
            elements,
            faces,
            element_faces,
        })
    }

    pub fn n_per_axis(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Element edge length `h = L / n`.
    pub fn element_size(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn num_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn coords(&self) -> &[[f64; 3]] {
        &self.coords
    }

    pub fn element_nodes(&self, e: usize) -> &[usize; 8] {
        &self.elements[e]
    }

    pub fn elements(&self) -> &[[usize; 8]] {
        &self.elements
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn element_faces(&self, e: usize) -> &[usize; 6] {
        &self.element_faces[e]
    }

    /// Lexicographic `(i, j, k)` index of element `e`.
    pub fn element_ijk(&self, e: usize) -> [usize; 3] {
        let n = self.n;
        [e % n, (e / n) % n, e / (n * n)]
    }

    pub fn element_index(&self, ijk: [usize; 3]) -> usize {
        ijk[0] + self.n * (ijk[1] + self.n * ijk[2])
    }

    pub fn node_ijk(&self, p: usize) -> [usize; 3] {
        let np = self.n + 1;
        [p % np, (p / np) % np, p / (np * np)]
    }

    /// Lower corner of element `e`.
    pub fn element_origin(&self, e: usize) -> [f64; 3] {
        self.coords[self.elements[e][0]]
    }

    /// Boundary faces lying in `plane`.
    pub fn boundary_faces(&self, plane: BoundaryPlane) -> impl Iterator<Item = usize> + '_ {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.boundary == Some(plane))
            .map(|(i, _)| i)
    }

    pub fn num_boundary_faces(&self) -> usize {
        self.faces.iter().filter(|f| f.boundary.is_some()).count()
    }

    /// Nodes lying in `plane`.
    pub fn boundary_nodes(&self, plane: BoundaryPlane) -> Vec<usize> {
        let axis = plane.axis();
        let target = if plane.is_max() { self.n } else { 0 };
        (0..self.num_nodes())
            .filter(|&p| self.node_ijk(p)[axis] == target)
            .collect()
    }

    /// Element adjacency through shared nodes (26-neighbourhood on the
    /// structured grid), excluding the element itself.
    pub fn vertex_neighbors(&self, e: usize) -> Vec<usize> {
        let [i, j, k] = self.element_ijk(e);
        let n = self.n as isize;
        let mut out = Vec::with_capacity(26);
        for dk in -1isize..=1 {
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    if di == 0 && dj == 0 && dk == 0 {
                        continue;
                    }
                    let (a, b, c) = (i as isize + di, j as isize + dj, k as isize + dk);
                    if a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n {
                        continue;
                    }
                    out.push(self.element_index([a as usize, b as usize, c as usize]));
                }
            }
        }
        out
    }

    /// Writes `id x y z` per node.
    pub fn write_nodes<W: Write>(&self, mut out: W) -> Result<()> {
        for (p, x) in self.coords.iter().enumerate() {
            writeln!(out, "{p} {:.17e} {:.17e} {:.17e}", x[0], x[1], x[2])?;
        }
        Ok(())
    }

    /// Writes `id n0 .. n7` per element.
    pub fn write_elements<W: Write>(&self, mut out: W) -> Result<()> {
        for (e, conn) in self.elements.iter().enumerate() {
            let nodes: Vec<String> = conn.iter().map(|p| p.to_string()).collect();
            writeln!(out, "{e} {}", nodes.join(" "))?;
        }
        Ok(())
    }
}

pub fn build_mesh(n_per_axis: usize, length: f64) -> Result<StructuredMesh> {
    StructuredMesh::new(n_per_axis, length)
}

/// Non-overlapping box partition plus overlapping element lists.
#[derive(Debug, Clone)]
pub struct Decomposition {
    dims: [usize; 3],
    overlap: usize,
    owner: Vec<usize>,
    owned: Vec<Vec<usize>>,
    overlapping: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn new(mesh: &StructuredMesh, dims: [usize; 3], overlap: usize) -> Result<Self> {
        let n = mesh.n_per_axis();
        if dims.iter().any(|&m| m == 0) {
            return Err(Error::InvalidDecomposition(
                "subdomain counts must be positive".into(),
            ));
        }
        if let Some(&m) = dims.iter().find(|&&m| n % m != 0) {
            return Err(Error::InvalidDecomposition(format!(
                "{m} subdomains per axis do not divide {n} elements per axis"
            )));
        }
        let block = [n / dims[0], n / dims[1], n / dims[2]];
        let num_sub = dims[0] * dims[1] * dims[2];

        let owner: Vec<usize> = (0..mesh.num_elements())
            .map(|e| {
                let ijk = mesh.element_ijk(e);
                let s = [ijk[0] / block[0], ijk[1] / block[1], ijk[2] / block[2]];
                s[0] + dims[0] * (s[1] + dims[1] * s[2])
            })
            .collect();
        let mut owned = vec![Vec::new(); num_sub];
        for (e, &s) in owner.iter().enumerate() {
            owned[s].push(e);
        }
        let overlapping = owned
            .iter()
            .map(|elems| dilate(mesh, elems, overlap))
            .collect();

        Ok(Self {
            dims,
            overlap,
            owner,
            owned,
            overlapping,
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn num_subdomains(&self) -> usize {
        self.owned.len()
    }

    pub fn owner(&self, e: usize) -> usize {
        self.owner[e]
    }

    pub fn owner_map(&self) -> &[usize] {
        &self.owner
    }

    pub fn owned_elements(&self, s: usize) -> &[usize] {
        &self.owned[s]
    }

    pub fn overlapping_elements(&self, s: usize) -> &[usize] {
        &self.overlapping[s]
    }

    /// Writes `element owner` per element.
    pub fn write_owner_map<W: Write>(&self, mut out: W) -> Result<()> {
        for (e, s) in self.owner.iter().enumerate() {
            writeln!(out, "{e} {s}")?;
        }
        Ok(())
    }
}

pub fn decompose(mesh: &StructuredMesh, dims: [usize; 3], overlap: usize) -> Result<Decomposition> {
    Decomposition::new(mesh, dims, overlap)
}

/// Grows an element set by `layers` rings of vertex-adjacent elements.
/// Returns a sorted list.
pub fn dilate(mesh: &StructuredMesh, elements: &[usize], layers: usize) -> Vec<usize> {
    let mut inside = vec![false; mesh.num_elements()];
    let mut front: Vec<usize> = Vec::new();
    for &e in elements {
        if !inside[e] {
            inside[e] = true;
            front.push(e);
        }
    }
    for _ in 0..layers {
        let mut next = Vec::new();
        for &e in &front {
            for nb in mesh.vertex_neighbors(e) {
                if !inside[nb] {
                    inside[nb] = true;
                    next.push(nb);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        front = next;
    }
    inside
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(e, _)| e)
        .collect()
}

/// Owning subdomains of every node: the owners of all elements sharing it.
pub fn node_membership(mesh: &StructuredMesh, decomp: &Decomposition) -> Vec<Vec<usize>> {
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); mesh.num_nodes()];
    for (e, conn) in mesh.elements().iter().enumerate() {
        let s = decomp.owner(e);
        for &p in conn {
            sets[p].insert(s);
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Owning subdomains of every face (one or two entries).
pub fn face_membership(mesh: &StructuredMesh, decomp: &Decomposition) -> Vec<Vec<usize>> {
    mesh.faces()
        .iter()
        .map(|f| {
            let mut set: Vec<usize> = f
                .elements
                .iter()
                .flatten()
                .map(|&e| decomp.owner(e))
                .collect();
            set.sort_unstable();
            set.dedup();
            set
        })
        .collect()
}
