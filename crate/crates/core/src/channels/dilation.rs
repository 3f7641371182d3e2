use super::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix};
use crate::quantum::{check_beta, DensityOperator, SystemSpec};
use crate::scalar::Real;

/// Unitary `V : S⊗E → S'⊗E'` together with an initial environment state.
///
/// Output ordering is always `S'⊗E'`, with `E'` traced out. The environment
/// state may be mixed; it is unravelled into its eigenvectors when the Kraus
/// operators are formed.
#[derive(Clone, Debug)]
pub struct Dilation<R: Real> {
    input: SystemSpec<R>,
    environment: SystemSpec<R>,
    output: SystemSpec<R>,
    environment_out: SystemSpec<R>,
    unitary: ComplexMatrix<R>,
    env_state: DensityOperator<R>,
}

impl<R: Real> Dilation<R> {
    pub fn new(
        input: &SystemSpec<R>,
        environment: &SystemSpec<R>,
        output: &SystemSpec<R>,
        environment_out: &SystemSpec<R>,
        unitary: ComplexMatrix<R>,
        env_state: DensityOperator<R>,
    ) -> Result<Self> {
        let d_in = input.dim() * environment.dim();
        let d_out = output.dim() * environment_out.dim();
        if d_in != d_out {
            return Err(Error::DimensionMismatch(format!("dilation maps dimension {d_in} to {d_out}")));
        }
        if unitary.rows() != d_in || unitary.cols() != d_in {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {}x{}, expected {d_in}x{d_in}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        if env_state.dim() != environment.dim() {
            return Err(Error::DimensionMismatch("environment state does not live on E".into()));
        }
        for s in [environment, output, environment_out] {
            check_beta(input, s)?;
        }
        let residual = (&(&unitary.adjoint() * &unitary) - &ComplexMatrix::identity(d_in)).frobenius();
        if residual > R::derived_tol() {
            return Err(Error::NotUnitary { residual: residual.as_f64() });
        }
        Ok(Self {
            input: input.clone(),
            environment: environment.clone(),
            output: output.clone(),
            environment_out: environment_out.clone(),
            unitary,
            env_state: env_state.on_system(environment)?,
        })
    }

    pub fn input(&self) -> &SystemSpec<R> {
        &self.input
    }

    pub fn environment(&self) -> &SystemSpec<R> {
        &self.environment
    }

    pub fn output(&self) -> &SystemSpec<R> {
        &self.output
    }

    pub fn environment_out(&self) -> &SystemSpec<R> {
        &self.environment_out
    }

    pub fn unitary(&self) -> &ComplexMatrix<R> {
        &self.unitary
    }

    pub fn env_state(&self) -> &DensityOperator<R> {
        &self.env_state
    }

    /// `H_S⊗1 + 1⊗H_E`.
    pub fn total_hamiltonian_in(&self) -> ComplexMatrix<R> {
        additive(&self.input, &self.environment)
    }

    /// `H_S'⊗1 + 1⊗H_E'`.
    pub fn total_hamiltonian_out(&self) -> ComplexMatrix<R> {
        additive(&self.output, &self.environment_out)
    }

    /// `Λ(ρ) = Tr_E' V(ρ⊗η)V†`.
    pub fn channel(&self) -> Result<QuantumChannel<R>> {
        let (ds, de) = (self.input.dim(), self.environment.dim());
        let (dsp, dep) = (self.output.dim(), self.environment_out.dim());
        let v = &self.unitary;
        let branches: Vec<(R, Vec<_>)> = match self.env_state.pure_vector() {
            Some(eta) => vec![(R::one(), eta.to_vec())],
            None => {
                let e = self.env_state.eigen();
                let cutoff = R::epsilon() * R::lit(16.0);
                (0..e.dim()).filter(|&l| e.eigenvalues[l] > cutoff).map(|l| (e.eigenvalues[l], e.vector(l))).collect()
            }
        };
        let mut kraus = Vec::with_capacity(branches.len() * dep);
        for (p, eta) in &branches {
            let w = p.sqrt();
            for k in 0..dep {
                kraus.push(ComplexMatrix::from_fn(dsp, ds, |sp, s| {
                    let row = sp * dep + k;
                    eta.iter().enumerate().fold(num_traits::Zero::zero(), |acc: crate::C<R>, (e, &a)| {
                        acc + v[(row, s * de + e)] * a
                    }) * w
                }));
            }
        }
        QuantumChannel::new(kraus, &self.input, &self.output)
    }

    /// `‖V H_in − H_out V‖₂`; zero exactly when `V` conserves total energy.
    pub fn energy_conservation_defect(&self) -> R {
        let lhs = &self.unitary * &self.total_hamiltonian_in();
        let rhs = &self.total_hamiltonian_out() * &self.unitary;
        (&lhs - &rhs).frobenius()
    }

    /// `H_in − V† H_out V` on `S⊗E`.
    pub fn energy_change_operator(&self) -> ComplexMatrix<R> {
        let v = &self.unitary;
        &self.total_hamiltonian_in() - &(&(&v.adjoint() * &self.total_hamiltonian_out()) * v)
    }
}

fn additive<R: Real>(a: &SystemSpec<R>, b: &SystemSpec<R>) -> ComplexMatrix<R> {
    &tensor(a.hamiltonian(), &ComplexMatrix::identity(b.dim())) + &tensor(&ComplexMatrix::identity(a.dim()), b.hamiltonian())
}

pub fn channel_from_dilation<R: Real>(dilation: &Dilation<R>) -> Result<QuantumChannel<R>> {
    dilation.channel()
}

pub fn energy_conservation_defect<R: Real>(dilation: &Dilation<R>) -> R {
    dilation.energy_conservation_defect()
}
