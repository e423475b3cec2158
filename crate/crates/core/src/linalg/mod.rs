//! Sparse linear algebra: CSR storage, direct factorization, GMRES and
//! Matrix Market I/O.

pub mod factor;
pub mod gmres;
pub mod matrix_market;
pub mod sparse;

pub use factor::{factorize, FactorKind, Factorization};
pub use gmres::{gmres, GmresConfig, GmresResult, GmresStatus, IdentityOperator, LinearOperator};
pub use sparse::{dot, norm2, spmv, CsrMatrix};
