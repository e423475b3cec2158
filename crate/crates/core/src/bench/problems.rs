//! Benchmark boundary value problems on the unit cube.

use super::load::LoadProgram;
use crate::assembly::{Model, PotentialBoundary};
use crate::elements::{Discretization, DofMap, ElementPair, Prescribed};
use crate::error::{Error, Result};
use crate::material::MaterialParams;
use crate::mesh::{build_mesh, BoundaryPlane, StructuredMesh};

/// Cube edge length (mm).
pub const EDGE_LENGTH: f64 = 1.0;
/// Pre-swelling of the free-swelling problems.
pub const FREE_SWELLING_J0: f64 = 1.01;
/// Pre-swelling of the punch problem.
pub const PUNCH_J0: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    LinearElasticity,
    FreeSwellingFlux,
    FreeSwellingMu,
    Punch,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::LinearElasticity,
        ProblemKind::FreeSwellingFlux,
        ProblemKind::FreeSwellingMu,
        ProblemKind::Punch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::LinearElasticity => "linear-elasticity",
            ProblemKind::FreeSwellingFlux => "free-swelling-flux",
            ProblemKind::FreeSwellingMu => "free-swelling-mu",
            ProblemKind::Punch => "punch",
        }
    }

    pub fn is_coupled(self) -> bool {
        self != ProblemKind::LinearElasticity
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown problem '{s}'"))
    }
}

/// A fully specified discrete benchmark.
#[derive(Debug, Clone)]
pub struct BenchmarkProblem {
    pub kind: ProblemKind,
    pub model: Model,
    /// Boundary load program, if any.
    pub program: Option<LoadProgram>,
}

impl BenchmarkProblem {
    pub fn ndofs(&self) -> usize {
        self.model.ndofs()
    }

    /// End of the load program (0 for static problems).
    pub fn end_time(&self) -> f64 {
        self.program.map_or(0.0, |p| p.end_time())
    }
}

/// Builds any benchmark by kind. `pair` is ignored for elasticity.
pub fn make_problem(kind: ProblemKind, n: usize, pair: ElementPair) -> Result<BenchmarkProblem> {
    match kind {
        ProblemKind::LinearElasticity => make_linear_elasticity(n),
        ProblemKind::FreeSwellingFlux => make_free_swelling(n, pair, FreeSwellingBc::Flux),
        ProblemKind::FreeSwellingMu => make_free_swelling(n, pair, FreeSwellingBc::ChemicalPotential),
        ProblemKind::Punch => make_punch(n, pair),
    }
}

/// Q1 elasticity, clamped on the whole boundary, loaded by a vector of ones.
pub fn make_linear_elasticity(n: usize) -> Result<BenchmarkProblem> {
    let mesh = build_mesh(n, EDGE_LENGTH)?;
    let mut model = Model::new(mesh, Discretization::Elasticity, MaterialParams::reference(1.0));
    for plane in BoundaryPlane::ALL {
        for p in model.mesh.boundary_nodes(plane) {
            for c in 0..3 {
                let dof = model.dofmap.deformation_dof(p, c);
                model.constraints.add(dof, Prescribed::Fixed(0.0))?;
            }
        }
    }
    model.load = Some(vec![1.0; model.ndofs()]);
    Ok(BenchmarkProblem {
        kind: ProblemKind::LinearElasticity,
        model,
        program: None,
    })
}

/// Diffusion boundary condition on the outer faces of the free-swelling cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeSwellingBc {
    /// (i) prescribed normal flux.
    Flux,
    /// (ii) prescribed chemical potential.
    ChemicalPotential,
    /// Zero normal flux everywhere.
    Sealed,
}

const MIN_PLANES: [BoundaryPlane; 3] = [BoundaryPlane::X1Min, BoundaryPlane::X2Min, BoundaryPlane::X3Min];
const MAX_PLANES: [BoundaryPlane; 3] = [BoundaryPlane::X1Max, BoundaryPlane::X2Max, BoundaryPlane::X3Max];

/// DOFs carrying the normal flux through `plane`: face DOFs for RT0, the
/// normal nodal component for Q1.
pub fn normal_flux_dofs(mesh: &StructuredMesh, dofmap: &DofMap, plane: BoundaryPlane) -> Vec<usize> {
    match dofmap.discretization() {
        Discretization::Coupled(ElementPair::Q1RT0) => mesh
            .boundary_faces(plane)
            .filter_map(|f| dofmap.face_dof(f))
            .collect(),
        Discretization::Coupled(ElementPair::Q1Q1) => mesh
            .boundary_nodes(plane)
            .into_iter()
            .filter_map(|p| dofmap.nodal_flux_dof(p, plane.axis()))
            .collect(),
        Discretization::Elasticity => Vec::new(),
    }
}

fn add_symmetry(model: &mut Model) -> Result<()> {
    for plane in MIN_PLANES {
        for p in model.mesh.boundary_nodes(plane) {
            let dof = model.dofmap.deformation_dof(p, plane.axis());
            model.constraints.add(dof, Prescribed::Fixed(0.0))?;
        }
        for dof in normal_flux_dofs(&model.mesh, &model.dofmap, plane) {
            model.constraints.add(dof, Prescribed::Fixed(0.0))?;
        }
    }
    Ok(())
}

fn coupled_model(n: usize, pair: ElementPair, params: MaterialParams) -> Result<Model> {
    params.validate()?;
    let mesh = build_mesh(n, EDGE_LENGTH)?;
    Ok(Model::new(mesh, Discretization::Coupled(pair), params))
}

/// One eighth of a free-swelling cube with symmetry on the `X_i = 0` planes.
pub fn make_free_swelling(n: usize, pair: ElementPair, bc: FreeSwellingBc) -> Result<BenchmarkProblem> {
    make_free_swelling_with(n, pair, bc, MaterialParams::reference(FREE_SWELLING_J0))
}

pub fn make_free_swelling_with(
    n: usize,
    pair: ElementPair,
    bc: FreeSwellingBc,
    params: MaterialParams,
) -> Result<BenchmarkProblem> {
    let mut model = coupled_model(n, pair, params)?;
    add_symmetry(&mut model)?;
    let (kind, program) = match bc {
        FreeSwellingBc::Flux => {
            let program = LoadProgram::free_swelling_flux();
            for plane in MAX_PLANES {
                for dof in normal_flux_dofs(&model.mesh, &model.dofmap, plane) {
                    model
                        .constraints
                        .add(dof, Prescribed::Program { program, scale: 1.0 })?;
                }
            }
            (ProblemKind::FreeSwellingFlux, Some(program))
        }
        FreeSwellingBc::ChemicalPotential => {
            let program = LoadProgram::free_swelling_mu();
            model.potential_boundary = Some(PotentialBoundary {
                planes: MAX_PLANES.to_vec(),
                program,
            });
            (ProblemKind::FreeSwellingMu, Some(program))
        }
        FreeSwellingBc::Sealed => {
            for plane in MAX_PLANES {
                for dof in normal_flux_dofs(&model.mesh, &model.dofmap, plane) {
                    model.constraints.add(dof, Prescribed::Fixed(0.0))?;
                }
            }
            (ProblemKind::FreeSwellingFlux, None)
        }
    };
    Ok(BenchmarkProblem { kind, model, program })
}

/// Flat punch on one eighth of a sealed cube.
pub fn make_punch(n: usize, pair: ElementPair) -> Result<BenchmarkProblem> {
    make_punch_with(n, pair, MaterialParams::reference(PUNCH_J0))
}

pub fn make_punch_with(n: usize, pair: ElementPair, params: MaterialParams) -> Result<BenchmarkProblem> {
    if n == 0 || n % 3 != 0 {
        return Err(Error::InvalidParameter(format!(
            "punch mesh needs n divisible by 3, got {n}"
        )));
    }
    let mut model = coupled_model(n, pair, params)?;
    add_symmetry(&mut model)?;
    for plane in MAX_PLANES {
        for dof in normal_flux_dofs(&model.mesh, &model.dofmap, plane) {
            model.constraints.add(dof, Prescribed::Fixed(0.0))?;
        }
    }
    let program = LoadProgram::punch_default();
    let patch = n / 3;
    for p in model.mesh.boundary_nodes(BoundaryPlane::X2Max) {
        let [i, _, k] = model.mesh.node_ijk(p);
        if i > patch || k > patch {
            continue;
        }
        let dm = &model.dofmap;
        let (d0, d1, d2) = (dm.deformation_dof(p, 0), dm.deformation_dof(p, 1), dm.deformation_dof(p, 2));
        model.constraints.add(d0, Prescribed::Fixed(0.0))?;
        model
            .constraints
            .add(d1, Prescribed::Program { program, scale: -1.0 })?;
        model.constraints.add(d2, Prescribed::Fixed(0.0))?;
    }
    Ok(BenchmarkProblem {
        kind: ProblemKind::Punch,
        model,
        program: Some(program),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_names_round_trip() {
        for k in ProblemKind::ALL {
            assert_eq!(k.name().parse::<ProblemKind>().unwrap(), k);
        }
        assert!("bogus".parse::<ProblemKind>().is_err());
    }

    #[test]
    fn elasticity_constrains_whole_boundary() {
        let p = make_linear_elasticity(4).unwrap();
        let boundary_nodes = 5usize.pow(3) - 3usize.pow(3);
        assert_eq!(p.model.constraints.len(), 3 * boundary_nodes);
    }

    #[test]
    fn punch_rejects_misaligned_mesh() {
        assert!(make_punch(4, ElementPair::Q1RT0).is_err());
        assert!(make_punch(6, ElementPair::Q1RT0).is_ok());
    }

    #[test]
    fn punch_patch_size() {
        let p = make_punch(6, ElementPair::Q1Q1).unwrap();
        let m = &p.model;
        let patch = m
            .constraints
            .constrained_dofs()
            .filter(|&d| matches!(m.constraints.get(d), Some(Prescribed::Program { .. })))
            .count();
        assert_eq!(patch, 9);
    }

    #[test]
    fn sealed_rt0_constrains_every_boundary_face() {
        let p = make_free_swelling(3, ElementPair::Q1RT0, FreeSwellingBc::Sealed).unwrap();
        let faces = p.model.mesh.num_boundary_faces();
        let flux_constraints = p
            .model
            .constraints
            .constrained_dofs()
            .filter(|&d| !p.model.dofmap.kind(d).is_deformation())
            .count();
        assert_eq!(flux_constraints, faces);
    }

    #[test]
    fn mu_problem_has_potential_boundary() {
        let p = make_free_swelling(2, ElementPair::Q1Q1, FreeSwellingBc::ChemicalPotential).unwrap();
        assert_eq!(p.model.potential_boundary.as_ref().unwrap().planes.len(), 3);
        assert_eq!(p.end_time(), 4.0);
    }
}
