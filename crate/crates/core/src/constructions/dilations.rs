use num_traits::One;

use super::{coherent_measurement_channel_with_gap, ConstructionResult};
use crate::channels::Dilation;
use crate::error::{Error, Result};
use crate::linalg::{subsystem_permutation, swap, tensor, ComplexMatrix};
use crate::quantum::{qfi, DensityOperator, PureState, SystemSpec};
use crate::scalar::{c, Real, C};

/// CNOT on two qubits, control on the first factor.
fn cnot<R: Real>() -> ComplexMatrix<R> {
    let mut u = ComplexMatrix::zeros(4, 4);
    for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        u[(row, col)] = C::one();
    }
    u
}

/// Energy-conserving dilations of the two halves of the qubit channel
/// `ρ ↦ <1|ρ|1> η + <0|ρ|0> σ`, factored through a classical register `E`
/// with `H_E = 0`.
#[derive(Clone, Debug)]
pub struct FaistDilations<R: Real> {
    /// `Λ₁ : S → E`, a dephasing copy of the level into `E`.
    pub first: Dilation<R>,
    /// `Λ₂ : E → S`, swapping in `η` or `σ` from the environment.
    pub second: Dilation<R>,
    /// `F(η) + F(σ)`.
    pub cost_upper: R,
    /// `F(σ⊗η)` on the composite environment; equals `cost_upper` by additivity.
    pub cost_joint: R,
}

/// Builds both dilations for states `η`, `σ` on a qubit `S`.
///
/// `Λ₁` is the CNOT from `S` onto `E` (then swapped so the output is `E`).
/// `Λ₂` acts on `E⊗S⊗S̃` as `|0><0|⊗1 + |1><1|⊗SWAP` with environment state
/// `σ⊗η`, so outcome `0` leaves `σ` on `S` and outcome `1` swaps in `η`.
pub fn faist_dilations<R: Real>(eta: &DensityOperator<R>, sigma: &DensityOperator<R>) -> Result<FaistDilations<R>> {
    let s = eta.system().clone();
    if s.dim() != 2 || sigma.dim() != 2 {
        return Err(Error::DimensionMismatch("both states must live on a qubit".into()));
    }
    let sigma = sigma.on_system(&s)?;
    s.require_energy_basis()?;
    let beta = s.beta();
    let e = SystemSpec::trivial("E", 2, beta)?;
    let ket0 = PureState::basis(0, &e)?.density();

    let first = Dilation::new(&s, &e, &e, &s, &swap(2, 2) * &cnot(), ket0)?;

    let s_tilde = s.relabel("S~");
    let env = s.compose(&s_tilde)?;
    let env_out = e.compose(&s_tilde)?;
    let p0 = ComplexMatrix::diag_real(&[R::one(), R::zero()]);
    let p1 = ComplexMatrix::diag_real(&[R::zero(), R::one()]);
    let controlled = &tensor(&p0, &ComplexMatrix::identity(4)) + &tensor(&p1, &swap(2, 2));
    let to_output_order = subsystem_permutation(&[2, 2, 2], &[1, 0, 2])?;
    let env_state = sigma.tensor(eta)?;
    let second = Dilation::new(&e, &env, &s, &env_out, &to_output_order * &controlled, env_state.clone())?;

    Ok(FaistDilations { first, second, cost_upper: qfi(eta) + qfi(&sigma), cost_joint: qfi(&env_state) })
}

/// Tightness example for scale `a > 0`.
#[derive(Clone, Debug)]
pub struct TightnessExample<R: Real> {
    /// Coherent measurement channel with `H_S = ã|1><1|`, its pair and `C = ã/2`.
    pub result: ConstructionResult<R>,
    /// `CNOT·(Hadamard⊗1)` on `S⊗S'` with `S'` in `|0>`, output reordered to `S'⊗S`.
    pub dilation: Dilation<R>,
    /// `ã = a/√2`.
    pub a_tilde: R,
}

pub fn tightness_example<R: Real>(a: R) -> Result<TightnessExample<R>> {
    tightness_example_with_beta(a, R::one())
}

pub fn tightness_example_with_beta<R: Real>(a: R, beta: R) -> Result<TightnessExample<R>> {
    if !a.is_finite() || a <= R::zero() {
        return Err(Error::NonPositiveA(a.as_f64()));
    }
    let a_tilde = a * R::FRAC_1_SQRT_2();
    let result = coherent_measurement_channel_with_gap(a_tilde, beta)?;
    let s = result.channel.input().clone();
    let sp = result.channel.output().clone();
    let h = R::FRAC_1_SQRT_2();
    let hadamard = ComplexMatrix::from_fn(2, 2, |i, j| if i == 1 && j == 1 { c(-h) } else { c(h) });
    let v = &cnot() * &tensor(&hadamard, &ComplexMatrix::identity(2));
    let dilation = Dilation::new(&s, &sp, &sp, &s, &swap(2, 2) * &v, PureState::basis(0, &sp)?.density())?;
    let result = result.with("a", a).with("a_tilde", a_tilde);
    Ok(TightnessExample { result, dilation, a_tilde })
}
