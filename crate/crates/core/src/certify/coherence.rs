use crate::channels::QuantumChannel;
use crate::constructions::ReversiblePair;
use crate::error::{Error, Result};
use crate::linalg::{sqrtm, ComplexMatrix};
use crate::quantum::DensityOperator;
use crate::scalar::Real;

/// Local energy-change operator `H_S − Λ†(H_S')`.
pub fn energy_change<R: Real>(channel: &QuantumChannel<R>) -> ComplexMatrix<R> {
    let dual = channel.dual_apply(channel.output().hamiltonian()).expect("output Hamiltonian matches the channel");
    channel.input().hamiltonian() - &dual
}

/// `C(Λ, P) = ‖√ρ₁ (H_S − Λ†(H_S')) √ρ₂‖₂`.
pub fn compute_c<R: Real>(channel: &QuantumChannel<R>, pair: &ReversiblePair<R>) -> Result<R> {
    compute_c_states(channel, pair.rho1(), pair.rho2())
}

/// [`compute_c`] on an explicit pair; pure pairs use `|<ψ₁|O|ψ₂>|`.
pub fn compute_c_states<R: Real>(
    channel: &QuantumChannel<R>,
    rho1: &DensityOperator<R>,
    rho2: &DensityOperator<R>,
) -> Result<R> {
    let d = channel.input().dim();
    if rho1.dim() != d || rho2.dim() != d {
        return Err(Error::DimensionMismatch(format!("pair states do not live on the {d}-dimensional input")));
    }
    let overlap = rho1.overlap(rho2);
    if overlap.abs() > R::structural_tol() {
        return Err(Error::NotOrthogonal { overlap: overlap.as_f64() });
    }
    let o = energy_change(channel);
    if let (Some(a), Some(b)) = (rho1.pure_vector(), rho2.pure_vector()) {
        return Ok(o.sandwich(a, b)?.norm());
    }
    let s1 = sqrtm(rho1.matrix())?;
    let s2 = sqrtm(rho2.matrix())?;
    Ok((&(&s1 * &o) * &s2).frobenius())
}
