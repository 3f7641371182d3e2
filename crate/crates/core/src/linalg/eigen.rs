use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `A = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<R: Real> {
    /// Ascending.
    pub eigenvalues: Vec<R>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix<R>,
}

impl<R: Real> EigenDecomposition<R> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C<R>> {
        self.eigenvectors.col(k)
    }

    pub fn min(&self) -> R {
        self.eigenvalues.first().copied().unwrap_or_else(R::zero)
    }

    pub fn max(&self) -> R {
        self.eigenvalues.last().copied().unwrap_or_else(R::zero)
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(R) -> R) -> ComplexMatrix<R> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<R> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| acc + v[(i, k)] * v[(j, k)].conj() * fl[k])
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<R> {
        self.reconstruct_with(|l| l)
    }

    /// `V f(Λ) V†` for a complex-valued spectral function.
    pub fn reconstruct_complex(&self, f: impl Fn(R) -> C<R>) -> ComplexMatrix<R> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<C<R>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| acc + v[(i, k)] * v[(j, k)].conj() * fl[k])
        })
    }
}

/// Hermitian eigendecomposition with the default structural tolerance.
pub fn eigh<R: Real>(a: &ComplexMatrix<R>) -> Result<EigenDecomposition<R>> {
    eigh_tol(a, R::structural_tol())
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned ascending. Each eigenvector is normalised so its
/// largest-magnitude component (lowest index on ties) is real and positive,
/// which makes the output a deterministic function of the input.
pub fn eigh_tol<R: Real>(a: &ComplexMatrix<R>, tol: R) -> Result<EigenDecomposition<R>> {
    let n = a.ensure_square("eigh input")?;
    if !a.is_hermitian(tol) {
        return Err(Error::NonHermitian { residual: a.hermiticity_residual().as_f64() });
    }
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::<R>::identity(n);
    let scale = m.frobenius();
    let eps = R::epsilon();

    for _ in 0..MAX_SWEEPS {
        let off: R = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<R>()
            .sqrt();
        if off <= eps * scale || off == R::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<R> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        let col = fix_phase(v.col(src));
        for i in 0..n {
            vectors[(i, k)] = col[i];
        }
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors: vectors })
}

fn fix_phase<R: Real>(mut col: Vec<C<R>>) -> Vec<C<R>> {
    let mut best = 0;
    let mut best_abs = R::zero();
    let slack = R::lit(1e3) * R::epsilon();
    for (i, z) in col.iter().enumerate() {
        if z.norm() > best_abs * (R::one() + slack) {
            best = i;
            best_abs = z.norm();
        }
    }
    if best_abs > R::zero() {
        let phase = col[best].conj() / best_abs;
        for z in &mut col {
            *z = *z * phase;
        }
        col[best] = c(col[best].re);
    }
    col
}

/// One Jacobi rotation annihilating `m[p][q]`.
fn rotate<R: Real>(m: &mut ComplexMatrix<R>, v: &mut ComplexMatrix<R>, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == R::zero() {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Remove the phase of a_pq, then apply the real symmetric rotation.
    let phase = apq / g;
    let tau = (aqq - app) / (g + g);
    let t = if tau >= R::zero() {
        R::one() / (tau + (R::one() + tau * tau).sqrt())
    } else {
        -R::one() / (-tau + (R::one() + tau * tau).sqrt())
    };
    let cs = R::one() / (R::one() + t * t).sqrt();
    let sn = t * cs;
    // Columns p,q of G = diag(1, e^{-iφ}) · [[c, s], [-s, c]].
    let gpp: C<R> = c(cs);
    let gpq: C<R> = c(sn);
    let gqp: C<R> = phase.conj() * (-sn);
    let gqq: C<R> = phase.conj() * cs;

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * gpp + akq * gqp;
        m[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        m[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    m[(p, q)] = C::zero();
    m[(q, p)] = C::zero();
    m[(p, p)] = c(m[(p, p)].re);
    m[(q, q)] = c(m[(q, q)].re);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}
