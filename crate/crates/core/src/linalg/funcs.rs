use super::{eigh, eigh_tol, inner, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Scalar function applied through the spectral decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatFn<R: Real> {
    Sqrt,
    Exp,
    /// `x ↦ exp(−β x)`.
    NegExpScaled(R),
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
///
/// For [`MatFn::Sqrt`], eigenvalues in `[−tol, 0)` are clipped to zero and
/// anything lower is rejected.
pub fn mat_func<R: Real>(a: &ComplexMatrix<R>, f: MatFn<R>) -> Result<ComplexMatrix<R>> {
    mat_func_tol(a, f, R::structural_tol())
}

pub fn mat_func_tol<R: Real>(a: &ComplexMatrix<R>, f: MatFn<R>, tol: R) -> Result<ComplexMatrix<R>> {
    let e = eigh_tol(a, tol)?;
    match f {
        MatFn::Sqrt => {
            if e.min() < -tol {
                return Err(Error::NegativeEigenvalue { value: e.min().as_f64() });
            }
            Ok(e.reconstruct_with(|l| l.max(R::zero()).sqrt()))
        }
        MatFn::Exp => Ok(e.reconstruct_with(R::exp)),
        MatFn::NegExpScaled(beta) => Ok(e.reconstruct_with(|l| (-beta * l).exp())),
    }
}

/// Square root of a positive semidefinite matrix.
pub fn sqrtm<R: Real>(a: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
    mat_func(a, MatFn::Sqrt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    /// Sum of singular values.
    Trace,
    /// `√Tr(M†M)`.
    HilbertSchmidt,
    /// Largest singular value.
    Operator,
}

fn hermitian_dilation<R: Real>(m: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    let (r, c) = (m.rows(), m.cols());
    let mut h = ComplexMatrix::zeros(r + c, r + c);
    for i in 0..r {
        for j in 0..c {
            h[(i, r + j)] = m[(i, j)];
            h[(r + j, i)] = m[(i, j)].conj();
        }
    }
    h
}

/// Singular values in descending order.
///
/// Computed from the Hermitian dilation `[[0, M], [M†, 0]]`, whose spectrum
/// is `±σ_k` padded with zeros; this keeps small singular values accurate
/// instead of squaring them through `M†M`.
pub fn singular_values<R: Real>(m: &ComplexMatrix<R>) -> Vec<R> {
    let k = m.rows().min(m.cols());
    if k == 0 {
        return Vec::new();
    }
    let e = eigh(&hermitian_dilation(m)).expect("Hermitian dilation");
    e.eigenvalues.iter().rev().take(k).map(|&s| s.max(R::zero())).collect()
}

/// Thin QR of a tall matrix by modified Gram-Schmidt with one
/// reorthogonalisation pass. Columns of `Q` for dependent inputs are zero.
fn thin_qr<R: Real>(m: &ComplexMatrix<R>) -> (ComplexMatrix<R>, ComplexMatrix<R>) {
    let (r, c) = (m.rows(), m.cols());
    let mut q: Vec<Vec<C<R>>> = Vec::with_capacity(c);
    let mut rr = ComplexMatrix::zeros(c, c);
    let scale = m.max_abs();
    for j in 0..c {
        let mut v = m.col(j);
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let p = inner(qi, &v);
                rr[(i, j)] = rr[(i, j)] + p;
                for (vk, qk) in v.iter_mut().zip(qi) {
                    *vk = *vk - *qk * p;
                }
            }
        }
        let n = vec_norm(&v);
        if n > scale * R::epsilon() {
            rr[(j, j)] = C::new(n, R::zero());
            q.push(v.into_iter().map(|z| z / n).collect());
        } else {
            q.push(vec![C::new(R::zero(), R::zero()); r]);
        }
    }
    (ComplexMatrix::from_fn(r, c, |i, j| q[j][i]), rr)
}

/// `(‖M‖₁, U V†)` for `M = U Σ V†`, with `U V†` restricted to singular values
/// above the working precision. Rectangular inputs are first reduced to a
/// square factor by QR; the square factor uses the dilation of
/// [`singular_values`].
pub(crate) fn trace_norm_polar<R: Real>(m: &ComplexMatrix<R>) -> (R, ComplexMatrix<R>) {
    let (r, c) = (m.rows(), m.cols());
    if r > c {
        let (q, rr) = thin_qr(m);
        let (norm, p) = square_trace_norm_polar(&rr);
        return (norm, &q * &p);
    }
    if c > r {
        let (q, rr) = thin_qr(&m.adjoint());
        let (norm, p) = square_trace_norm_polar(&rr.adjoint());
        return (norm, &p * &q.adjoint());
    }
    square_trace_norm_polar(m)
}

fn square_trace_norm_polar<R: Real>(m: &ComplexMatrix<R>) -> (R, ComplexMatrix<R>) {
    let n = m.rows();
    let mut polar = ComplexMatrix::zeros(n, n);
    if n == 0 {
        return (R::zero(), polar);
    }
    let e = eigh(&hermitian_dilation(m)).expect("Hermitian dilation");
    let cutoff = e.max().max(R::zero()) * R::epsilon() * R::lit(32.0 * n as f64);
    let mut norm = R::zero();
    let two = R::lit(2.0);
    for idx in (0..2 * n).rev().take(n) {
        let sigma = e.eigenvalues[idx].max(R::zero());
        norm = norm + sigma;
        if sigma <= cutoff {
            continue;
        }
        // Eigenvector (u, v)/√2 for eigenvalue σ contributes u v†.
        let w = e.vector(idx);
        for i in 0..n {
            for j in 0..n {
                polar[(i, j)] = polar[(i, j)] + w[i] * w[n + j].conj() * two;
            }
        }
    }
    (norm, polar)
}


pub fn norm<R: Real>(m: &ComplexMatrix<R>, kind: NormKind) -> R {
    match kind {
        NormKind::HilbertSchmidt => m.frobenius(),
        NormKind::Trace => {
            if m.is_square() && m.is_hermitian(R::epsilon()) {
                eigh(m).expect("Hermitian").eigenvalues.iter().map(|l| l.abs()).sum()
            } else {
                singular_values(m).into_iter().sum()
            }
        }
        NormKind::Operator => {
            if m.is_square() && m.is_hermitian(R::epsilon()) {
                let e = eigh(m).expect("Hermitian");
                e.min().abs().max(e.max().abs())
            } else {
                singular_values(m).first().copied().unwrap_or_else(R::zero)
            }
        }
    }
}

/// Time evolution `e^{−iHt}` generated by a Hermitian `H`.
pub fn evolution<R: Real>(h: &ComplexMatrix<R>, t: R) -> Result<ComplexMatrix<R>> {
    let e = eigh(h)?;
    Ok(e.reconstruct_complex(|l| num_complex::Complex::from_polar(R::one(), -l * t)))
}

/// Spectral spread `λ_max − λ_min` of a Hermitian matrix.
pub fn spectral_spread<R: Real>(a: &ComplexMatrix<R>) -> Result<R> {
    let e = eigh(a)?;
    Ok(e.max() - e.min())
}
