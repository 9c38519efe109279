//! Numerical building blocks: quadrature, ODEs, root finding, eigenvalues.

pub mod grid;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod special;
pub mod tridiag;
