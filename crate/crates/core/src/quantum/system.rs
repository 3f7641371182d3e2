use crate::error::{Error, Result};
use crate::linalg::{eigh, tensor, ComplexMatrix};
use crate::quantum::DensityOperator;
use crate::scalar::{c, Real};

/// A finite-dimensional system: label, Hamiltonian and bath inverse temperature.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec<R: Real> {
    label: String,
    hamiltonian: ComplexMatrix<R>,
    beta: R,
}

impl<R: Real> SystemSpec<R> {
    pub fn new(label: impl Into<String>, hamiltonian: ComplexMatrix<R>, beta: R) -> Result<Self> {
        let label = label.into();
        let d = hamiltonian.ensure_square("Hamiltonian")?;
        if d == 0 {
            return Err(Error::InvalidSystem(format!("system {label} has dimension 0")));
        }
        if !hamiltonian.is_hermitian(R::structural_tol()) {
            return Err(Error::NonHermitian { residual: hamiltonian.hermiticity_residual().as_f64() });
        }
        if !beta.is_finite() || beta <= R::zero() {
            return Err(Error::InvalidSystem(format!("beta must be finite and positive, got {beta}")));
        }
        Ok(Self { label, hamiltonian: hamiltonian.hermitian_part(), beta })
    }

    /// System whose Hamiltonian is diagonal in the computational basis.
    pub fn diagonal(label: impl Into<String>, energies: &[R], beta: R) -> Result<Self> {
        Self::new(label, ComplexMatrix::diag_real(energies), beta)
    }

    /// System with `H = 0`.
    pub fn trivial(label: impl Into<String>, dim: usize, beta: R) -> Result<Self> {
        Self::new(label, ComplexMatrix::zeros(dim, dim), beta)
    }

    /// Qubit with `H = gap·|1><1|`.
    pub fn qubit(label: impl Into<String>, gap: R, beta: R) -> Result<Self> {
        Self::diagonal(label, &[R::zero(), gap], beta)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix<R> {
        &self.hamiltonian
    }

    pub fn beta(&self) -> R {
        self.beta
    }

    /// Diagonal of the Hamiltonian, `E_i = <i|H|i>`.
    pub fn energies(&self) -> Vec<R> {
        self.hamiltonian.diagonal().into_iter().map(|z| z.re).collect()
    }

    /// True when the computational basis is an energy eigenbasis.
    pub fn is_energy_basis(&self) -> bool {
        self.hamiltonian.is_diagonal(R::structural_tol())
    }

    pub(crate) fn require_energy_basis(&self) -> Result<()> {
        if self.is_energy_basis() {
            Ok(())
        } else {
            Err(Error::InvalidSystem(format!("Hamiltonian of {} is not diagonal", self.label)))
        }
    }

    /// Same system with a relabelled copy of the Hamiltonian.
    pub fn relabel(&self, label: impl Into<String>) -> Self {
        Self { label: label.into(), ..self.clone() }
    }

    /// Same system with `H + shift·1`.
    pub fn shifted(&self, shift: R) -> Self {
        let h = &self.hamiltonian + &ComplexMatrix::identity(self.dim()).scale(shift);
        Self { hamiltonian: h, ..self.clone() }
    }

    /// Composite `self ⊗ other` with `H = H_A ⊗ 1 + 1 ⊗ H_B`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_beta(self, other)?;
        let h = &tensor(&self.hamiltonian, &ComplexMatrix::identity(other.dim()))
            + &tensor(&ComplexMatrix::identity(self.dim()), &other.hamiltonian);
        Ok(Self { label: format!("{}*{}", self.label, other.label), hamiltonian: h, beta: self.beta })
    }

    /// Gibbs state `e^{−βH} / Tr e^{−βH}`.
    pub fn gibbs_state(&self) -> DensityOperator<R> {
        let e = eigh(&self.hamiltonian).expect("Hamiltonian validated at construction");
        let e0 = e.min();
        let beta = self.beta;
        let unnormalized = e.reconstruct_with(|l| (-beta * (l - e0)).exp());
        let z = unnormalized.trace().re;
        let tau = unnormalized.map(|v| v / c(z)).hermitian_part();
        DensityOperator::from_matrix_unchecked(tau, self.clone())
    }

    /// Gibbs weights `τ_i = <i|τ|i>` in the computational basis.
    pub fn gibbs_weights(&self) -> Vec<R> {
        self.gibbs_state().matrix().diagonal().into_iter().map(|z| z.re).collect()
    }
}

pub(crate) fn check_beta<R: Real>(a: &SystemSpec<R>, b: &SystemSpec<R>) -> Result<()> {
    let tol = R::structural_tol() * R::one().max(a.beta.abs());
    if (a.beta - b.beta).abs() > tol {
        return Err(Error::BetaMismatch { input: a.beta.as_f64(), output: b.beta.as_f64() });
    }
    Ok(())
}
