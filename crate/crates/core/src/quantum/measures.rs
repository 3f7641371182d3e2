use crate::error::{Error, Result};
use crate::linalg::{eigh, orthogonal_complement, sqrtm, ComplexMatrix};
use crate::quantum::{DensityOperator, PureState};
use crate::scalar::{Real, C};

fn check_dims<R: Real>(a: &DensityOperator<R>, b: &DensityOperator<R>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("states of dimension {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// Uhlmann fidelity `F(ρ,σ) = Tr√(√ρ σ √ρ)`, clamped to `[0, 1]`.
pub fn fidelity<R: Real>(rho: &DensityOperator<R>, sigma: &DensityOperator<R>) -> Result<R> {
    check_dims(rho, sigma)?;
    let f = if let Some(psi) = rho.pure_vector() {
        expectation(sigma.matrix(), psi).max(R::zero()).sqrt()
    } else if let Some(psi) = sigma.pure_vector() {
        expectation(rho.matrix(), psi).max(R::zero()).sqrt()
    } else {
        root_fidelity(rho.matrix(), sigma.matrix())?
    };
    Ok(f.max(R::zero()).min(R::one()))
}

/// `Tr√(√a b √a)` for positive semidefinite `a`, `b`.
fn root_fidelity<R: Real>(a: &ComplexMatrix<R>, b: &ComplexMatrix<R>) -> Result<R> {
    let sa = sqrtm(a)?;
    let inner = (&(&sa * b) * &sa).hermitian_part();
    Ok(eigh(&inner)?.eigenvalues.iter().map(|&l| l.max(R::zero()).sqrt()).sum())
}

fn expectation<R: Real>(m: &ComplexMatrix<R>, v: &[C<R>]) -> R {
    m.sandwich(v, v).expect("matching dimension").re
}

/// Purified distance `√(1 − F²)`.
///
/// When either argument is a known pure state `ψ`, `1 − F²` is evaluated
/// as the weight of the other state on the orthogonal complement of `ψ`,
/// which avoids the cancellation in `1 − F²` near zero distance.
pub fn purified_distance<R: Real>(rho: &DensityOperator<R>, sigma: &DensityOperator<R>) -> Result<R> {
    check_dims(rho, sigma)?;
    let (psi, other) = match (rho.pure_vector(), sigma.pure_vector()) {
        (Some(p), _) => (Some(p), sigma),
        (None, Some(p)) => (Some(p), rho),
        (None, None) => (None, sigma),
    };
    let d2 = match psi {
        Some(psi) => {
            let tr = other.matrix().trace().re;
            let off: R = orthogonal_complement(psi).iter().map(|v| expectation(other.matrix(), v)).sum();
            off / tr
        }
        None => {
            let f = fidelity(rho, sigma)?;
            R::one() - f * f
        }
    };
    Ok(d2.max(R::zero()).min(R::one()).sqrt())
}

/// Quantum Fisher information of `ρ` with respect to its system Hamiltonian,
/// `2 Σ (λ_i − λ_j)² / (λ_i + λ_j) |<e_i|H|e_j>|²`.
///
/// Pairs with `λ_i + λ_j ≤ 1e-12` are omitted.
pub fn qfi<R: Real>(rho: &DensityOperator<R>) -> R {
    let e = rho.eigen();
    let h = rho.system().hamiltonian();
    let n = e.dim();
    let v = &e.eigenvectors;
    let hv = h * v;
    let vhv = &v.adjoint() * &hv;
    let lam: Vec<R> = e.eigenvalues.iter().map(|&l| l.max(R::zero())).collect();
    let cutoff = R::lit(1e-12);
    let two = R::lit(2.0);
    let mut acc = R::zero();
    for i in 0..n {
        for j in 0..n {
            let s = lam[i] + lam[j];
            if s <= cutoff {
                continue;
            }
            let d = lam[i] - lam[j];
            acc = acc + two * d * d / s * vhv[(i, j)].norm_sqr();
        }
    }
    acc
}

/// `D_min(ψ‖τ) = −log₂ <ψ|τ|ψ>`.
pub fn d_min<R: Real>(psi: &PureState<R>, tau: &DensityOperator<R>) -> Result<R> {
    if psi.amplitudes().len() != tau.dim() {
        return Err(Error::DimensionMismatch("pure state and reference state".into()));
    }
    let overlap = expectation(tau.matrix(), psi.amplitudes());
    if overlap <= R::lit(1e-15) {
        return Err(Error::ZeroOverlap { overlap: overlap.as_f64() });
    }
    Ok(-overlap.log2())
}

/// `D_max(ρ‖τ) = log₂ λ_max(τ^{-1/2} ρ τ^{-1/2})` for full-rank `τ`.
pub fn d_max<R: Real>(rho: &DensityOperator<R>, tau: &DensityOperator<R>) -> Result<R> {
    check_dims(rho, tau)?;
    let e = tau.eigen();
    if e.min() <= R::zero() {
        return Err(Error::InvalidState(format!("reference state is rank deficient (λ_min = {})", e.min())));
    }
    let inv_sqrt = e.reconstruct_with(|l| R::one() / l.sqrt());
    let m = (&(&inv_sqrt * rho.matrix()) * &inv_sqrt).hermitian_part();
    Ok(eigh(&m)?.max().log2())
}

/// `λ_max − λ_min` of a Hermitian operator.
pub fn spectral_spread<R: Real>(o: &ComplexMatrix<R>) -> Result<R> {
    crate::linalg::spectral_spread(o)
}

/// Trace distance norm `‖ρ − σ‖₁` between two operators of equal shape.
pub fn trace_norm_distance<R: Real>(a: &ComplexMatrix<R>, b: &ComplexMatrix<R>) -> R {
    crate::linalg::norm(&(a - b), crate::linalg::NormKind::Trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::SystemSpec;

    fn qubit() -> SystemSpec<f64> {
        SystemSpec::qubit("S", 1.0, 1.0).unwrap()
    }

    #[test]
    fn gibbs_examples() {
        let flat = SystemSpec::<f64>::trivial("T", 3, 2.0).unwrap();
        assert!(flat.gibbs_state().matrix().approx_eq(&ComplexMatrix::identity(3).scale(1.0 / 3.0), 1e-15));

        for beta in [0.1, 1.0, 7.0] {
            let s = SystemSpec::<f64>::qubit("S", 1.0, beta).unwrap();
            let w = s.gibbs_weights();
            assert!((w[0] - 1.0 / (1.0 + (-beta).exp())).abs() < 1e-15);
            assert!((w[1] - (-beta).exp() / (1.0 + (-beta).exp())).abs() < 1e-15);
        }

        let s = SystemSpec::<f64>::diagonal("S", &[0.0, 1.0, 2.0], 1.0).unwrap();
        let z = 1.0 + (-1f64).exp() + (-2f64).exp();
        let expect = [1.0 / z, (-1f64).exp() / z, (-2f64).exp() / z];
        for (w, e) in s.gibbs_weights().iter().zip(expect) {
            assert!((w - e).abs() < 1e-15);
        }
    }

    #[test]
    fn fidelity_examples() {
        let s = qubit();
        let zero = PureState::basis(0, &s).unwrap().density();
        let one = PureState::basis(1, &s).unwrap().density();
        let mixed = DensityOperator::maximally_mixed(&s);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!((fidelity(&zero, &mixed).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((fidelity(&mixed, &zero).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        // Same value through the general (mixed-state) route.
        let zero_m = DensityOperator::new(zero.matrix().clone(), &s).unwrap();
        assert!((fidelity(&zero_m, &mixed).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn purified_distance_examples() {
        let s = qubit();
        let zero = PureState::basis(0, &s).unwrap().density();
        let one = PureState::basis(1, &s).unwrap().density();
        let mixed = DensityOperator::maximally_mixed(&s);
        assert_eq!(purified_distance(&zero, &zero).unwrap(), 0.0);
        assert!((purified_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!((purified_distance(&zero, &mixed).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(purified_distance(&mixed, &mixed).unwrap(), 0.0);
        let big = SystemSpec::<f64>::trivial("B", 3, 1.0).unwrap();
        assert!(purified_distance(&zero, &DensityOperator::maximally_mixed(&big)).is_err());
    }

    #[test]
    fn qfi_examples() {
        let s = qubit();
        assert!(qfi(&s.gibbs_state()).abs() < 1e-15);
        let plus = PureState::from_real(&[1.0, 1.0], &s).unwrap().density();
        // 4(<H²> − <H>²) = 4(1/2 − 1/4)
        assert!((qfi(&plus) - 1.0).abs() < 1e-14);
        let plus32 = PureState::<f32>::from_real(&[1.0, 1.0], &SystemSpec::qubit("S", 1.0, 1.0).unwrap())
            .unwrap()
            .density();
        assert!((qfi(&plus32) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn d_min_d_max_examples() {
        let flat = SystemSpec::<f64>::trivial("T", 4, 1.0).unwrap();
        let tau = flat.gibbs_state();
        let psi = PureState::from_real(&[0.3, 0.1, 0.5, 0.2], &flat).unwrap();
        assert!((d_min(&psi, &tau).unwrap() - 2.0).abs() < 1e-14);
        assert!((d_max(&psi.density(), &tau).unwrap() - 2.0).abs() < 1e-12);

        let s = qubit();
        let tau = s.gibbs_state();
        let zero = PureState::basis(0, &s).unwrap();
        let expect = -(1.0 / (1.0 + (-1f64).exp())).log2();
        assert!((d_min(&zero, &tau).unwrap() - expect).abs() < 1e-14);
        assert!((d_max(&zero.density(), &tau).unwrap() - expect).abs() < 1e-14);
        let one = PureState::basis(1, &s).unwrap();
        let t1 = s.gibbs_weights()[1];
        assert!((d_max(&one.density(), &tau).unwrap() + t1.log2()).abs() < 1e-14);
        assert!(d_max(&tau, &tau).unwrap().abs() < 1e-14);
    }

    #[test]
    fn zero_overlap() {
        let s = SystemSpec::<f64>::qubit("S", 1.0, 1.0).unwrap();
        let rank_one = DensityOperator::new(ComplexMatrix::diag_real(&[1.0, 0.0]), &s).unwrap();
        let one = PureState::basis(1, &s).unwrap();
        assert!(matches!(d_min(&one, &rank_one), Err(Error::ZeroOverlap { .. })));
    }
}
