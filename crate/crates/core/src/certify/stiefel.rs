//! Descent on stacked Kraus operators `W = [A_1; …; A_K]` with `W†W = 1`.

use crate::linalg::{eigh, ComplexMatrix};
use crate::scalar::Real;

/// `M (M†M)^{-1/2}`, the closest isometry to `M`.
pub(crate) fn polar<R: Real>(m: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    let gram = (&m.adjoint() * m).hermitian_part();
    let e = eigh(&gram).expect("Gram matrices are Hermitian");
    let floor = R::epsilon();
    m * &e.reconstruct_with(|l| R::one() / l.max(floor).sqrt())
}

/// Projection of a Euclidean gradient onto the tangent space at `w`.
pub(crate) fn tangent<R: Real>(w: &ComplexMatrix<R>, z: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    z - &(w * &(&w.adjoint() * z).hermitian_part())
}

pub(crate) fn blocks<R: Real>(w: &ComplexMatrix<R>, rows: usize) -> Vec<ComplexMatrix<R>> {
    let k = w.rows() / rows;
    (0..k).map(|b| ComplexMatrix::from_fn(rows, w.cols(), |i, j| w[(b * rows + i, j)])).collect()
}

pub(crate) fn stack<R: Real>(parts: &[ComplexMatrix<R>]) -> ComplexMatrix<R> {
    let rows = parts[0].rows();
    ComplexMatrix::from_fn(rows * parts.len(), parts[0].cols(), |i, j| parts[i / rows][(i % rows, j)])
}

pub(crate) struct DescentSettings<R: Real> {
    pub max_iter: usize,
    pub grad_tol: R,
}

/// Minimises `loss` over isometries by projected gradient steps with polar
/// retraction and Armijo backtracking. `loss` returns the value and its
/// Euclidean gradient with respect to `W` (real inner product `Re Tr(Z†dW)`).
pub(crate) fn minimize<R: Real>(
    mut w: ComplexMatrix<R>,
    loss: impl Fn(&ComplexMatrix<R>) -> (R, ComplexMatrix<R>),
    settings: &DescentSettings<R>,
) -> (ComplexMatrix<R>, R) {
    let (mut f, mut z) = loss(&w);
    let mut step = R::one();
    let armijo = R::lit(0.3);
    let min_step = R::lit(1e-16);
    for _ in 0..settings.max_iter {
        let xi = tangent(&w, &z);
        let g2 = xi.frobenius().powi(2);
        if g2.sqrt() <= settings.grad_tol || f <= R::zero() {
            break;
        }
        let mut t = (step * R::lit(2.0)).min(R::lit(100.0));
        let mut accepted = None;
        while t >= min_step {
            let cand = polar(&(&w - &xi.scale(t)));
            let (fc, zc) = loss(&cand);
            if fc <= f - armijo * t * g2 {
                accepted = Some((cand, fc, zc));
                break;
            }
            t = t / R::lit(2.0);
        }
        match accepted {
            Some((cand, fc, zc)) => {
                w = cand;
                f = fc;
                z = zc;
                step = t;
            }
            None => break,
        }
    }
    (w, f)
}
