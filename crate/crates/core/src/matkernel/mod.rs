//! Dense linear algebra for fixed 2×2 and 4×4 real matrices.
//!
//! Nothing here allocates; all routines are pure functions of their inputs.

mod eig;
mod expm;
mod jacobi;
mod mat;
mod scalar;

pub use eig::{char_poly, gen_eigvals, ComplexQuad, CLUSTER_RADIUS, ROOT_MAX_ITER};
pub use expm::{expm, TAYLOR_ORDER};
pub use jacobi::{sym_eigvals, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL, SYMMETRY_TOL};
pub use mat::{Mat2, Mat4};
pub use scalar::{Extended, Real, EXTENDED_BITS};
