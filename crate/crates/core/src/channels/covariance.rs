use super::QuantumChannel;
use crate::linalg::{eigh, evolution, tensor, ComplexMatrix};
use crate::scalar::Real;

/// Time-translation covariance verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceVerdict<R: Real> {
    pub covariant: bool,
    /// Largest `‖W_t J W_t† − J‖₂` over the time grid.
    pub grid_defect: R,
    /// `‖[J, G]‖₂` with `G = H_S^T⊗1 − 1⊗H_S'`; zero iff `J` is block diagonal
    /// across frequency sectors.
    pub sector_defect: R,
    /// Times at which the grid defect was evaluated.
    pub times: Vec<R>,
}

/// Generator of the joint phase rotation acting on the Choi matrix.
fn choi_generator<R: Real>(ch: &QuantumChannel<R>) -> ComplexMatrix<R> {
    let h_in = ch.input().hamiltonian();
    let h_out = ch.output().hamiltonian();
    &tensor(&h_in.transpose(), &ComplexMatrix::identity(h_out.rows()))
        - &tensor(&ComplexMatrix::identity(h_in.rows()), h_out)
}

/// Half-periods `π/|Ω|` for each distinct nonzero sector gap `Ω`, followed by
/// a few incommensurate times.
pub fn covariance_times<R: Real>(ch: &QuantumChannel<R>) -> Vec<R> {
    let g = choi_generator(ch);
    let levels = eigh(&g).map(|e| e.eigenvalues).unwrap_or_default();
    let merge = R::lit(1e-9);
    let mut gaps: Vec<R> = Vec::new();
    for a in &levels {
        for b in &levels {
            let w = (*a - *b).abs();
            if w > merge && !gaps.iter().any(|x| (*x - w).abs() <= merge * R::one().max(w)) {
                gaps.push(w);
            }
        }
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut times: Vec<R> = gaps.iter().map(|w| R::PI() / *w).collect();
    times.extend([1.0, std::f64::consts::SQRT_2, std::f64::consts::E, 0.5 * (1.0 + 5f64.sqrt())].map(R::lit));
    times
}

pub fn is_covariant<R: Real>(ch: &QuantumChannel<R>, tol: R) -> CovarianceVerdict<R> {
    let j = ch.choi();
    let g = choi_generator(ch);
    let sector_defect = (&(&j * &g) - &(&g * &j)).frobenius();
    let times = covariance_times(ch);
    let mut grid_defect = R::zero();
    for &t in &times {
        // W_t = e^{itG} = evolution(G, −t).
        let w = evolution(&g, -t).expect("generator is Hermitian by construction");
        let rotated = &(&w * &j) * &w.adjoint();
        grid_defect = grid_defect.max((&rotated - &j).frobenius());
    }
    CovarianceVerdict { covariant: sector_defect <= tol && grid_defect <= tol, grid_defect, sector_defect, times }
}
