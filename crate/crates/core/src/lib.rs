//! Monolithic finite-element solver for coupled chemo-mechanics (hydrogel
//! swelling) on structured hexahedral meshes.
//!
//! The linearized Newton systems are solved with right-preconditioned GMRES,
//! using a two-level overlapping Schwarz preconditioner whose coarse space
//! (GDSW or RGDSW) is built algebraically from the assembled matrix and the
//! degree-of-freedom to subdomain membership.
//!
//! Module map:
//!
//! * [`mesh`]: structured meshes of the cube and box decompositions.
//! * [`elements`]: Q1 and RT0 reference elements, quadrature, DOF numbering
//!   and Dirichlet elimination.
//! * [`material`]: free energy, dissipation potential and their derivatives.
//! * [`assembly`]: global residual, tangent and incremental potential.
//! * [`linalg`]: CSR matrices, sparse direct factorization, GMRES.
//! * [`schwarz`]: one- and two-level restricted additive Schwarz.
//! * [`driver`]: Newton-Raphson and time stepping.
//! * [`bench`]: benchmark problems, load programs and the experiment harness.

pub mod assembly;
pub mod bench;
pub mod driver;
pub mod elements;
pub mod error;
pub mod linalg;
pub mod material;
pub mod mesh;
pub mod schwarz;

pub use error::{Error, Result};
