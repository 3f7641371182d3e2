//! Dense complex linear algebra: Hermitian eigensolver, spectral matrix
//! functions, tensor products, partial traces and norms.

mod eigen;
mod funcs;
mod matrix;
mod tensor;

pub use eigen::{eigh, eigh_tol, EigenDecomposition};
pub(crate) use funcs::trace_norm_polar;
pub use funcs::{evolution, mat_func, mat_func_tol, norm, singular_values, spectral_spread, sqrtm, MatFn, NormKind};
pub use matrix::{basis, inner, orthogonal_complement, vec_norm, ComplexMatrix};
pub use tensor::{partial_trace, subsystem_permutation, swap, tensor, tensor_vec, Keep};
