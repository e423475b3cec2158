//! Reference elements, quadrature, DOF numbering and Dirichlet handling.

pub mod dirichlet;
pub mod dofmap;
pub mod q1;
pub mod quadrature;
pub mod rt0;

pub use dirichlet::{apply_dirichlet, ConstraintTable, Prescribed};
pub use dofmap::{
    build_dofmap, dof_count, element_face_signs, Discretization, DofKind, DofMap, ElementPair,
    Location,
};
pub use q1::{shape_q1, shape_q1_physical};
pub use quadrature::{FaceQuadrature, QuadratureRule};
pub use rt0::{shape_rt0, shape_rt0_physical};
