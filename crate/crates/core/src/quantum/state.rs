use crate::error::{Error, Result};
use crate::linalg::{eigh, tensor, tensor_vec, vec_norm, ComplexMatrix, EigenDecomposition};
use crate::quantum::SystemSpec;
use crate::scalar::{Real, C};

/// Unit vector on a system.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<R: Real> {
    amplitudes: Vec<C<R>>,
    system: SystemSpec<R>,
}

impl<R: Real> PureState<R> {
    /// Requires unit norm within `1e-12` (scaled to the precision of `R`).
    pub fn new(amplitudes: Vec<C<R>>, system: &SystemSpec<R>) -> Result<Self> {
        check_len(amplitudes.len(), system)?;
        let n = vec_norm(&amplitudes);
        let tol = R::lit(1e-12).max(R::epsilon() * R::lit(64.0));
        if (n - R::one()).abs() > tol {
            return Err(Error::InvalidState(format!("amplitudes have norm {n}")));
        }
        Ok(Self { amplitudes, system: system.clone() })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<C<R>>, system: &SystemSpec<R>) -> Result<Self> {
        check_len(amplitudes.len(), system)?;
        let n = vec_norm(&amplitudes);
        if n == R::zero() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / n).collect(), system: system.clone() })
    }

    /// Real, non-negative superposition `Σ_k a_k |k>`.
    pub fn from_real(amplitudes: &[R], system: &SystemSpec<R>) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| C::new(a, R::zero())).collect(), system)
    }

    pub fn basis(i: usize, system: &SystemSpec<R>) -> Result<Self> {
        if i >= system.dim() {
            return Err(Error::InvalidIndex(format!("level {i} of a {}-level system", system.dim())));
        }
        Ok(Self { amplitudes: crate::linalg::basis(system.dim(), i), system: system.clone() })
    }

    pub fn amplitudes(&self) -> &[C<R>] {
        &self.amplitudes
    }

    pub fn system(&self) -> &SystemSpec<R> {
        &self.system
    }

    pub fn density(&self) -> DensityOperator<R> {
        DensityOperator {
            matrix: ComplexMatrix::projector(&self.amplitudes),
            system: self.system.clone(),
            pure: Some(self.amplitudes.clone()),
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self { amplitudes: tensor_vec(&self.amplitudes, &other.amplitudes), system: self.system.compose(&other.system)? })
    }
}

fn check_len<R: Real>(len: usize, system: &SystemSpec<R>) -> Result<()> {
    if len != system.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{len} amplitudes for {}-dimensional system {}",
            system.dim(),
            system.label()
        )));
    }
    Ok(())
}

/// Positive, unit-trace operator on a system.
///
/// States built from a [`PureState`] remember their vector, which lets the
/// distance measures use rank-one formulas that stay accurate when the
/// distance is far below `√ε`.
#[derive(Clone, Debug)]
pub struct DensityOperator<R: Real> {
    matrix: ComplexMatrix<R>,
    system: SystemSpec<R>,
    pure: Option<Vec<C<R>>>,
}

impl<R: Real> DensityOperator<R> {
    pub fn new(matrix: ComplexMatrix<R>, system: &SystemSpec<R>) -> Result<Self> {
        Self::new_tol(matrix, system, R::structural_tol())
    }

    /// Validates hermiticity, `λ_min ≥ −tol` and `|Tr − 1| ≤ tol`.
    pub fn new_tol(matrix: ComplexMatrix<R>, system: &SystemSpec<R>, tol: R) -> Result<Self> {
        if matrix.rows() != system.dim() || !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on {}-dimensional system {}",
                matrix.rows(),
                matrix.cols(),
                system.dim(),
                system.label()
            )));
        }
        if !matrix.is_hermitian(tol) {
            return Err(Error::NonHermitian { residual: matrix.hermiticity_residual().as_f64() });
        }
        let tr = matrix.trace().re;
        if (tr - R::one()).abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let e = eigh(&matrix)?;
        if e.min() < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {}", e.min())));
        }
        Ok(Self { matrix: matrix.hermitian_part(), system: system.clone(), pure: None })
    }

    /// Maximally mixed state `1/d`.
    pub fn maximally_mixed(system: &SystemSpec<R>) -> Self {
        let d = system.dim();
        let m = ComplexMatrix::identity(d).scale(R::one() / R::lit(d as f64));
        Self { matrix: m, system: system.clone(), pure: None }
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix<R>, system: SystemSpec<R>) -> Self {
        Self { matrix, system, pure: None }
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.matrix
    }

    pub fn system(&self) -> &SystemSpec<R> {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The state vector, when the operator was built from one.
    pub fn pure_vector(&self) -> Option<&[C<R>]> {
        self.pure.as_deref()
    }

    pub fn eigen(&self) -> EigenDecomposition<R> {
        eigh(&self.matrix).expect("density operators are Hermitian")
    }

    pub fn min_eigenvalue(&self) -> R {
        self.eigen().min()
    }

    /// `Tr(ρσ)`.
    pub fn overlap(&self, other: &Self) -> R {
        self.matrix.hs_inner(&other.matrix).re
    }

    /// Same matrix viewed on another system of equal dimension.
    pub fn on_system(&self, system: &SystemSpec<R>) -> Result<Self> {
        if system.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", system.dim(), self.dim())));
        }
        Ok(Self { system: system.clone(), ..self.clone() })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let pure = match (&self.pure, &other.pure) {
            (Some(a), Some(b)) => Some(tensor_vec(a, b)),
            _ => None,
        };
        Ok(Self { matrix: tensor(&self.matrix, &other.matrix), system: self.system.compose(&other.system)?, pure })
    }

    /// `‖[ρ, H]‖₂` for the system Hamiltonian.
    pub fn coherence_residual(&self) -> R {
        self.matrix.commutator(self.system.hamiltonian()).expect("same dimension").frobenius()
    }

    /// No coherence between distinct energy eigenspaces within `tol`.
    pub fn is_incoherent(&self, tol: R) -> bool {
        self.coherence_residual() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let s = SystemSpec::<f64>::qubit("S", 1.0, 1.0).unwrap();
        assert!(DensityOperator::new(ComplexMatrix::diag_real(&[0.5, 0.5]), &s).is_ok());
        assert!(DensityOperator::new(ComplexMatrix::diag_real(&[1.5, -0.5]), &s).is_err());
        assert!(DensityOperator::new(ComplexMatrix::diag_real(&[0.5, 0.6]), &s).is_err());
        assert!(DensityOperator::new(ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]), &s).is_err());
    }

    #[test]
    fn pure_state_norm() {
        let s = SystemSpec::<f64>::qubit("S", 1.0, 1.0).unwrap();
        assert!(PureState::new(vec![C::new(1.0, 0.0), C::new(1.0, 0.0)], &s).is_err());
        let p = PureState::from_real(&[1.0, 1.0], &s).unwrap();
        assert!((vec_norm(p.amplitudes()) - 1.0).abs() < 1e-15);
        assert!(p.density().pure_vector().is_some());
    }

    #[test]
    fn incoherence() {
        let s = SystemSpec::<f64>::qubit("S", 1.0, 1.0).unwrap();
        assert!(s.gibbs_state().is_incoherent(1e-12));
        assert!(!PureState::from_real(&[1.0, 1.0], &s).unwrap().density().is_incoherent(1e-3));
        let flat = SystemSpec::<f64>::trivial("T", 2, 1.0).unwrap();
        assert!(PureState::from_real(&[1.0, 1.0], &flat).unwrap().density().is_incoherent(1e-12));
    }
}
