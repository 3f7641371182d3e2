use crate::error::{Error, Result};
use crate::linalg::{eigh, norm, partial_trace, tensor, ComplexMatrix, Keep, NormKind};
use crate::quantum::{check_beta, DensityOperator, SystemSpec};
use crate::scalar::{Real, C};

/// CPTP map between two systems, stored as a Kraus list.
///
/// Kraus lists are never canonicalised; compare channels through
/// [`QuantumChannel::choi`].
#[derive(Clone, Debug)]
pub struct QuantumChannel<R: Real> {
    kraus: Vec<ComplexMatrix<R>>,
    input: SystemSpec<R>,
    output: SystemSpec<R>,
}

/// Orthonormal vectors spanning an outcome's projector and the state prepared on it.
pub type MeasureBranch<R> = (Vec<Vec<C<R>>>, DensityOperator<R>);

/// Outcome of [`QuantumChannel::validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelCertificate<R: Real> {
    pub trace_preserving: bool,
    pub completely_positive: bool,
    /// `‖Σ M†M − 1‖₂`.
    pub tp_residual: R,
    /// `max(0, −λ_min(J))`.
    pub cp_residual: R,
}

impl<R: Real> ChannelCertificate<R> {
    pub fn is_cptp(&self) -> bool {
        self.trace_preserving && self.completely_positive
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GibbsVerdict<R: Real> {
    pub preserving: bool,
    /// `‖Λ(τ_S) − τ_S'‖₁`.
    pub residual: R,
}

impl<R: Real> QuantumChannel<R> {
    /// Checks shapes and that both systems share one inverse temperature.
    /// Trace preservation is reported by [`validate`](Self::validate), not enforced.
    pub fn new(kraus: Vec<ComplexMatrix<R>>, input: &SystemSpec<R>, output: &SystemSpec<R>) -> Result<Self> {
        check_beta(input, output)?;
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch("empty Kraus list".into()));
        }
        for k in &kraus {
            if k.rows() != output.dim() || k.cols() != input.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {}x{} for map {} -> {}",
                    k.rows(),
                    k.cols(),
                    input.dim(),
                    output.dim()
                )));
            }
        }
        Ok(Self { kraus, input: input.clone(), output: output.clone() })
    }

    /// Like [`new`](Self::new) but rejects maps that fail trace preservation at `tol`.
    pub fn checked(kraus: Vec<ComplexMatrix<R>>, input: &SystemSpec<R>, output: &SystemSpec<R>, tol: R) -> Result<Self> {
        let ch = Self::new(kraus, input, output)?;
        let cert = ch.validate_tol(tol);
        if !cert.trace_preserving {
            return Err(Error::NotTracePreserving { residual: cert.tp_residual.as_f64() });
        }
        Ok(ch)
    }

    pub fn identity(system: &SystemSpec<R>) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(system.dim())], input: system.clone(), output: system.clone() }
    }

    pub fn unitary(u: ComplexMatrix<R>, input: &SystemSpec<R>, output: &SystemSpec<R>) -> Result<Self> {
        Self::new(vec![u], input, output)
    }

    /// `ρ ↦ Tr(ρ) ω`.
    pub fn replacer(input: &SystemSpec<R>, state: &DensityOperator<R>) -> Result<Self> {
        let basis: Vec<Vec<C<R>>> = (0..input.dim()).map(|i| crate::linalg::basis(input.dim(), i)).collect();
        Self::measure_prepare(input, state.system(), &[(basis, state.clone())])
    }

    /// Measure-and-prepare channel `ρ ↦ Σ_b Tr(P_b ρ) ω_b`.
    ///
    /// Each branch gives an orthonormal set spanning the projector `P_b` and
    /// the state `ω_b` prepared on that outcome. The projectors must resolve
    /// the identity for the result to be trace preserving.
    pub fn measure_prepare(
        input: &SystemSpec<R>,
        output: &SystemSpec<R>,
        branches: &[MeasureBranch<R>],
    ) -> Result<Self> {
        let mut kraus = Vec::new();
        for (vectors, state) in branches {
            if state.dim() != output.dim() {
                return Err(Error::DimensionMismatch("prepared state does not live on the output".into()));
            }
            let prepared: Vec<(R, Vec<C<R>>)> = match state.pure_vector() {
                Some(v) => vec![(R::one(), v.to_vec())],
                None => {
                    let e = state.eigen();
                    (0..e.dim()).filter(|&k| e.eigenvalues[k] > R::zero()).map(|k| (e.eigenvalues[k], e.vector(k))).collect()
                }
            };
            for b in vectors {
                if b.len() != input.dim() {
                    return Err(Error::DimensionMismatch("measurement vector does not live on the input".into()));
                }
                for (p, w) in &prepared {
                    kraus.push(ComplexMatrix::outer(w, b).scale(p.sqrt()));
                }
            }
        }
        Self::new(kraus, input, output)
    }

    /// `(1 − p)·a + p·b`.
    pub fn mixture(p: R, a: &Self, b: &Self) -> Result<Self> {
        if a.input.dim() != b.input.dim() || a.output.dim() != b.output.dim() {
            return Err(Error::DimensionMismatch("mixing channels with different shapes".into()));
        }
        let wa = (R::one() - p).sqrt();
        let wb = p.sqrt();
        let kraus = a.kraus.iter().map(|k| k.scale(wa)).chain(b.kraus.iter().map(|k| k.scale(wb))).collect();
        Self::new(kraus, &a.input, &a.output)
    }

    pub fn kraus(&self) -> &[ComplexMatrix<R>] {
        &self.kraus
    }

    pub fn input(&self) -> &SystemSpec<R> {
        &self.input
    }

    pub fn output(&self) -> &SystemSpec<R> {
        &self.output
    }

    /// Same Kraus list attached to different systems of equal dimensions.
    pub fn with_systems(&self, input: &SystemSpec<R>, output: &SystemSpec<R>) -> Result<Self> {
        Self::new(self.kraus.clone(), input, output)
    }

    pub fn validate(&self) -> ChannelCertificate<R> {
        self.validate_tol(R::derived_tol())
    }

    pub fn validate_tol(&self, tol: R) -> ChannelCertificate<R> {
        let d = self.input.dim();
        let sum = self.kraus.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&k.adjoint() * k));
        let tp_residual = (&sum - &ComplexMatrix::identity(d)).frobenius();
        let cp_residual = (-eigh(&self.choi()).map(|e| e.min()).unwrap_or(R::zero())).max(R::zero());
        ChannelCertificate {
            trace_preserving: tp_residual <= tol,
            completely_positive: cp_residual <= tol,
            tp_residual,
            cp_residual,
        }
    }

    pub fn apply_matrix(&self, rho: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        if rho.rows() != self.input.dim() || !rho.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator into a channel on dimension {}",
                rho.rows(),
                rho.cols(),
                self.input.dim()
            )));
        }
        let d = self.output.dim();
        Ok(self.kraus.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&(k * rho) * &k.adjoint())))
    }

    /// `Σ M_k ρ M_k†` as a state on the output system.
    pub fn apply(&self, rho: &DensityOperator<R>) -> Result<DensityOperator<R>> {
        let out = self.apply_matrix(rho.matrix())?.hermitian_part();
        Ok(DensityOperator::from_matrix_unchecked(out, self.output.clone()))
    }

    /// Heisenberg-picture map `Σ M_k† A M_k`.
    pub fn dual_apply(&self, a: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        if a.rows() != self.output.dim() || !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} observable for a channel with output dimension {}",
                a.rows(),
                a.cols(),
                self.output.dim()
            )));
        }
        let d = self.input.dim();
        Ok(self.kraus.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&(&k.adjoint() * a) * k)))
    }

    /// Unnormalised Choi matrix `Σ_ij |i><j| ⊗ Λ(|i><j|)` (input factor first).
    pub fn choi(&self) -> ComplexMatrix<R> {
        let (din, dout) = (self.input.dim(), self.output.dim());
        let n = din * dout;
        let mut j = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            // |K⟫ = Σ_i |i> ⊗ K|i>
            let v: Vec<C<R>> = (0..din).flat_map(|i| (0..dout).map(move |m| k[(m, i)])).collect();
            j = &j + &ComplexMatrix::projector(&v);
        }
        j
    }

    /// Kraus form from a Choi matrix; rejects non-PSD or non-trace-preserving input.
    pub fn from_choi(choi: &ComplexMatrix<R>, input: &SystemSpec<R>, output: &SystemSpec<R>) -> Result<Self> {
        Self::from_choi_tol(choi, input, output, R::derived_tol())
    }

    pub fn from_choi_tol(choi: &ComplexMatrix<R>, input: &SystemSpec<R>, output: &SystemSpec<R>, tol: R) -> Result<Self> {
        let (din, dout) = (input.dim(), output.dim());
        if choi.rows() != din * dout || !choi.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {}x{} for map {din} -> {dout}",
                choi.rows(),
                choi.cols()
            )));
        }
        let e = eigh(choi)?;
        if e.min() < -tol {
            return Err(Error::NotPsd { min_eigenvalue: e.min().as_f64() });
        }
        let reduced = partial_trace(choi, (din, dout), Keep::A)?;
        let residual = (&reduced - &ComplexMatrix::identity(din)).frobenius();
        if residual > tol {
            return Err(Error::NotTracePreserving { residual: residual.as_f64() });
        }
        let cutoff = R::epsilon() * R::lit(16.0) * R::one().max(e.max());
        let kraus: Vec<ComplexMatrix<R>> = (0..e.dim())
            .filter(|&k| e.eigenvalues[k] > cutoff)
            .map(|k| {
                let v = e.vector(k);
                let s = e.eigenvalues[k].sqrt();
                ComplexMatrix::from_fn(dout, din, |m, i| v[i * dout + m] * s)
            })
            .collect();
        Self::new(kraus, input, output)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Self) -> Result<Self> {
        if first.output.dim() != self.input.dim() {
            return Err(Error::DimensionMismatch(format!(
                "composing map with output dimension {} into map with input dimension {}",
                first.output.dim(),
                self.input.dim()
            )));
        }
        check_beta(&first.output, &self.input)?;
        let kraus = self.kraus.iter().flat_map(|a| first.kraus.iter().map(move |b| a * b)).collect();
        Self::new(kraus, &first.input, &self.output)
    }

    /// `id_R ⊗ Λ` with a reference system of dimension `d_ref` and trivial Hamiltonian.
    pub fn tensor_with_identity(&self, d_ref: usize) -> Result<Self> {
        let reference = SystemSpec::trivial("R", d_ref, self.input.beta())?;
        let id = ComplexMatrix::identity(d_ref);
        let kraus = self.kraus.iter().map(|k| tensor(&id, k)).collect();
        Self::new(kraus, &reference.compose(&self.input)?, &reference.compose(&self.output)?)
    }

    pub fn is_gibbs_preserving(&self, tol: R) -> GibbsVerdict<R> {
        let tau_in = self.input.gibbs_state();
        let tau_out = self.output.gibbs_state();
        let image = self.apply_matrix(tau_in.matrix()).expect("dimensions fixed at construction");
        let residual = norm(&(&image - tau_out.matrix()), NormKind::Trace);
        GibbsVerdict { preserving: residual <= tol, residual }
    }

    /// `‖J(self) − J(other)‖₂`.
    pub fn choi_distance(&self, other: &Self) -> Result<R> {
        let (a, b) = (self.choi(), other.choi());
        if a.rows() != b.rows() {
            return Err(Error::DimensionMismatch("channels of different shapes".into()));
        }
        Ok((&a - &b).frobenius())
    }
}

/// `second ∘ first`.
pub fn compose<R: Real>(second: &QuantumChannel<R>, first: &QuantumChannel<R>) -> Result<QuantumChannel<R>> {
    second.after(first)
}

#[cfg(test)]
pub(crate) fn depolarizing<R: Real>(system: &SystemSpec<R>) -> QuantumChannel<R> {
    QuantumChannel::replacer(system, &DensityOperator::maximally_mixed(system)).unwrap()
}
