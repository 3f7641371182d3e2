use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use num_traits::{One, Zero};

/// Kronecker product `A ⊗ B`; the left factor is the slow index.
pub fn tensor<R: Real>(a: &ComplexMatrix<R>, b: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Kronecker product of vectors.
pub fn tensor_vec<R: Real>(u: &[C<R>], v: &[C<R>]) -> Vec<C<R>> {
    u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Traces out one factor of a bipartite operator on `A ⊗ B`.
pub fn partial_trace<R: Real>(m: &ComplexMatrix<R>, dims: (usize, usize), keep: Keep) -> Result<ComplexMatrix<R>> {
    let (da, db) = dims;
    if !m.is_square() || m.rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over {da}x{db} of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(match keep {
        Keep::A => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).fold(C::zero(), |acc, k| acc + m[(i * db + k, j * db + k)])
        }),
        Keep::B => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).fold(C::zero(), |acc, k| acc + m[(k * db + i, k * db + j)])
        }),
    })
}

/// Permutation unitary reordering tensor factors.
///
/// The input space is `⊗_k dims[k]`; output factor `k` is input factor
/// `perm[k]`.
pub fn subsystem_permutation<R: Real>(dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix<R>> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation of {n} factors")));
    }
    let total: usize = dims.iter().product();
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut p = ComplexMatrix::zeros(total, total);
    let mut digits = vec![0usize; n];
    for idx in 0..total {
        let mut rem = idx;
        for k in (0..n).rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        let out = (0..n).fold(0, |acc, k| acc * out_dims[k] + digits[perm[k]]);
        p[(out, idx)] = C::one();
    }
    Ok(p)
}

/// Swap of two tensor factors: `|a>|b> ↦ |b>|a>`.
pub fn swap<R: Real>(da: usize, db: usize) -> ComplexMatrix<R> {
    subsystem_permutation(&[da, db], &[1, 0]).expect("valid permutation")
}
