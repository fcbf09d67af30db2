//! Small numerical building blocks shared by the solvers.

pub mod fd;
pub mod quad;
pub mod roots;
pub mod tridiag;

pub use fd::UniformDiff;
pub use quad::{gauss_legendre, simpson_uniform};
pub use roots::brent;
pub use tridiag::{lowest_eigenvalues, sturm_count};
