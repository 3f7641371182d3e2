use num_traits::Zero;

use super::{ConstructionResult, ReversiblePair};
use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{basis, orthogonal_complement, ComplexMatrix};
use crate::quantum::{d_max, d_min, qfi, DensityOperator, PureState, SystemSpec};
use crate::scalar::{c, Real, C};

/// `ρ ↦ <1|ρ|1> η + <0|ρ|0> σ` with `σ = (τ − τ₁η)/τ₀` on a qubit.
pub fn faist_channel<R: Real>(system: &SystemSpec<R>, eta: &DensityOperator<R>) -> Result<ConstructionResult<R>> {
    if system.dim() != 2 {
        return Err(Error::InvalidDimension(format!("qubit required, got dimension {}", system.dim())));
    }
    system.require_energy_basis()?;
    let eta = eta.on_system(system)?;
    let tau = system.gibbs_state();
    let w = system.gibbs_weights();
    let sigma_m = (tau.matrix() - &eta.matrix().scale(w[1])).scale(R::one() / w[0]);
    let sigma = feasible(sigma_m, system)?;
    let channel = QuantumChannel::measure_prepare(
        system,
        system,
        &[(vec![basis(2, 1)], eta.clone()), (vec![basis(2, 0)], sigma.clone())],
    )?;
    Ok(ConstructionResult::new(channel, None).with("qfi_eta", qfi(&eta)).with("qfi_sigma", qfi(&sigma)))
}

/// PSD check at `−1e-10` (precision-scaled) reported as [`Error::InfeasibleEta`].
fn feasible<R: Real>(m: ComplexMatrix<R>, system: &SystemSpec<R>) -> Result<DensityOperator<R>> {
    let m = m.hermitian_part();
    let e = crate::linalg::eigh(&m)?;
    if e.min() < -R::structural_tol() {
        return Err(Error::InfeasibleEta { min_eigenvalue: e.min().as_f64() });
    }
    DensityOperator::new_tol(m, system, R::structural_tol())
}

fn plus_minus<R: Real>(d: usize, i: usize, j: usize) -> (Vec<C<R>>, Vec<C<R>>) {
    let s = R::FRAC_1_SQRT_2();
    let mut p = vec![C::zero(); d];
    let mut m = vec![C::zero(); d];
    p[i] = c(s);
    p[j] = c(s);
    m[i] = c(s);
    m[j] = c(-s);
    (p, m)
}

/// Qubit `H_S = |1><1|` to trivial qubit: `ρ ↦ <+|ρ|+>|0><0| + <−|ρ|−>|1><1|`,
/// with the pair `{|+>, |−>}` and its exact recovery.
pub fn coherent_measurement_channel<R: Real>(beta: R) -> Result<ConstructionResult<R>> {
    coherent_measurement_channel_with_gap(R::one(), beta)
}

/// As [`coherent_measurement_channel`] with `H_S = gap·|1><1|`; `C = gap/2`.
pub fn coherent_measurement_channel_with_gap<R: Real>(gap: R, beta: R) -> Result<ConstructionResult<R>> {
    let s = SystemSpec::qubit("S", gap, beta)?;
    let sp = SystemSpec::trivial("S'", 2, beta)?;
    let (p, m) = plus_minus::<R>(2, 0, 1);
    let out = |k| PureState::basis(k, &sp).map(|s| s.density());
    let channel = QuantumChannel::measure_prepare(&s, &sp, &[(vec![p.clone()], out(0)?), (vec![m.clone()], out(1)?)])?;
    let plus = PureState::new(p, &s)?.density();
    let minus = PureState::new(m, &s)?.density();
    let recovery = QuantumChannel::measure_prepare(
        &sp,
        &s,
        &[(vec![basis(2, 0)], plus.clone()), (vec![basis(2, 1)], minus.clone())],
    )?;
    let pair = ReversiblePair::new(plus, minus, Some(recovery))?;
    Ok(ConstructionResult::new(channel, Some(pair)).with("C", gap / R::lit(2.0)).with("gap", gap))
}

/// Output of [`ordered_weight_inputs`].
#[derive(Clone, Debug)]
pub struct OrderedWeightInputs<R: Real> {
    pub psi: PureState<R>,
    pub phi: PureState<R>,
    pub r: R,
}

/// For Gibbs weights `τ_{S,i} < τ_{S',i'} < τ_{S,j}`, the mixing ratio
/// `r = (τ_{S',i'} − τ_{S,j})/(τ_{S,i} − τ_{S,j})`, `|ψ> = √r|i> + √(1−r)|j>`
/// and `|φ> = |i'>`.
pub fn ordered_weight_inputs<R: Real>(
    s: &SystemSpec<R>,
    sp: &SystemSpec<R>,
    i: usize,
    j: usize,
    ip: usize,
) -> Result<OrderedWeightInputs<R>> {
    s.require_energy_basis()?;
    sp.require_energy_basis()?;
    crate::quantum::check_beta(s, sp)?;
    if i >= s.dim() || j >= s.dim() || ip >= sp.dim() {
        return Err(Error::InvalidIndex(format!(
            "levels ({i}, {j}) of a {}-level input and {ip} of a {}-level output",
            s.dim(),
            sp.dim()
        )));
    }
    let (ws, wsp) = (s.gibbs_weights(), sp.gibbs_weights());
    let (ti, tip, tj) = (ws[i], wsp[ip], ws[j]);
    let r = (tip - tj) / (ti - tj);
    if !(ti < tip && tip < tj) || !(r > R::zero() && r < R::one()) {
        return Err(Error::ConditionNotMet { tau_s_i: ti.as_f64(), tau_sp_ip: tip.as_f64(), tau_s_j: tj.as_f64() });
    }
    let mut amps = vec![C::zero(); s.dim()];
    amps[i] = c(r.sqrt());
    amps[j] = c((R::one() - r).sqrt());
    Ok(OrderedWeightInputs { psi: PureState::normalized(amps, s)?, phi: PureState::basis(ip, sp)?, r })
}

/// Picks the pair of supported levels with distinct energies that maximises
/// `|a_i a_j| |E_i − E_j| / √(|a_i|² + |a_j|²)`.
fn coherent_levels<R: Real>(psi: &PureState<R>) -> Option<(usize, usize)> {
    let e = psi.system().energies();
    let a = psi.amplitudes();
    let floor = R::lit(1e-12);
    let gap_tol = R::structural_tol();
    let mut best: Option<((usize, usize), R)> = None;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let (ai, aj) = (a[i].norm(), a[j].norm());
            if ai <= floor || aj <= floor || (e[i] - e[j]).abs() <= gap_tol {
                continue;
            }
            let val = ai * aj * (e[i] - e[j]).abs() / (ai * ai + aj * aj).sqrt();
            if best.is_none_or(|(_, b)| val > b) {
                best = Some(((i, j), val));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// `Λ(ρ) = Tr(ψρ)φ + Tr((1−ψ)ρ)η` with `η = (τ_S' − Tr(ψτ_S)φ)/Tr((1−ψ)τ_S)`,
/// using the coherent level pair of `ψ` chosen by largest closed-form `C`.
pub fn general_pairwise_channel<R: Real>(psi: &PureState<R>, phi: &PureState<R>) -> Result<ConstructionResult<R>> {
    psi.system().require_energy_basis()?;
    let (i, j) = coherent_levels(psi).ok_or_else(|| Error::PreconditionViolated {
        condition: "psi has support on two levels of distinct energy".into(),
        residual: 0.0,
    })?;
    general_pairwise_channel_at(psi, phi, i, j)
}

/// [`general_pairwise_channel`] with the coherent levels `(i, j)` given.
///
/// The pair is `{ψ, ψ⊥}` with `|ψ⊥> ∝ a_j*|i> − a_i*|j>` and recovery
/// `R(X) = Tr(φX)ψ + Tr((1−φ)X)ψ⊥`.
pub fn general_pairwise_channel_at<R: Real>(
    psi: &PureState<R>,
    phi: &PureState<R>,
    i: usize,
    j: usize,
) -> Result<ConstructionResult<R>> {
    let s = psi.system();
    let sp = phi.system();
    s.require_energy_basis()?;
    crate::quantum::check_beta(s, sp)?;
    let d = s.dim();
    if i >= d || j >= d || i == j {
        return Err(Error::InvalidIndex(format!("coherent levels ({i}, {j}) on a {d}-level system")));
    }
    let a = psi.amplitudes();
    let e = s.energies();
    let floor = R::lit(1e-12);
    let violated = |condition: &str, residual: R| Error::PreconditionViolated {
        condition: condition.to_string(),
        residual: residual.as_f64(),
    };
    if a[i].norm() <= floor || a[j].norm() <= floor {
        return Err(violated("psi has nonzero amplitude on both coherent levels", a[i].norm().min(a[j].norm())));
    }
    if (e[i] - e[j]).abs() <= R::structural_tol() {
        return Err(violated("coherent levels have distinct energies", (e[i] - e[j]).abs()));
    }
    let tau_s = s.gibbs_state();
    let tau_sp = sp.gibbs_state();
    let dmin_psi = d_min(psi, &tau_s)?;
    let dmin_phi = d_min(phi, &tau_sp)?;
    let dmax_phi = d_max(&phi.density(), &tau_sp)?;
    let tol = R::lit(1e-8).max(R::derived_tol());
    if (dmin_psi - dmin_phi).abs() > tol {
        return Err(violated("D_min(psi||tau_S) = D_min(phi||tau_S')", (dmin_psi - dmin_phi).abs()));
    }
    if (dmin_phi - dmax_phi).abs() > tol {
        return Err(violated("D_min(phi||tau_S') = D_max(phi||tau_S')", (dmin_phi - dmax_phi).abs()));
    }

    let psi_rho = psi.density();
    let phi_rho = phi.density();
    let p = psi_rho.overlap(&tau_s);
    let eta_m = (tau_sp.matrix() - &phi_rho.matrix().scale(p)).scale(R::one() / (R::one() - p));
    let eta = feasible(eta_m, sp)?;
    let tr_phi_eta = phi_rho.overlap(&eta);

    let channel = QuantumChannel::measure_prepare(
        s,
        sp,
        &[(vec![a.to_vec()], phi_rho.clone()), (orthogonal_complement(a), eta.clone())],
    )?;

    let norm = (a[i].norm_sqr() + a[j].norm_sqr()).sqrt();
    let mut perp = vec![C::zero(); d];
    perp[i] = a[j].conj() / norm;
    perp[j] = -a[i].conj() / norm;
    let perp = PureState::normalized(perp, s)?;
    let perp_rho = perp.density();
    let recovery = QuantumChannel::measure_prepare(
        sp,
        s,
        &[(vec![phi.amplitudes().to_vec()], psi_rho.clone()), (orthogonal_complement(phi.amplitudes()), perp_rho.clone())],
    )?;
    let pair = ReversiblePair::new(psi_rho, perp_rho, Some(recovery))?;
    let closed_c = a[i].norm() * a[j].norm() * (e[i] - e[j]).abs() / norm;
    Ok(ConstructionResult::new(channel, Some(pair))
        .with("C", closed_c)
        .with("tr_phi_eta", tr_phi_eta)
        .with("i", R::lit(i as f64))
        .with("j", R::lit(j as f64))
        .with("E_i", e[i])
        .with("E_j", e[j]))
}

/// Channel built from `|±>_{i,i+1}` measured into `|0>, |1>` with the
/// remaining population sent to a fixed state `η` on `S'`, where both systems
/// carry the first `d` and `d'` entries of `energies`.
pub fn adjacent_level_channel<R: Real>(
    d: usize,
    dp: usize,
    energies: &[R],
    i: usize,
    beta: R,
) -> Result<ConstructionResult<R>> {
    if d < 3 || dp < 2 || dp > d {
        return Err(Error::InvalidDimension(format!("need d >= 3 and 2 <= d' <= d, got d = {d}, d' = {dp}")));
    }
    if energies.len() < d {
        return Err(Error::InvalidSpectrum(format!("{} energies for dimension {d}", energies.len())));
    }
    let e = &energies[..d];
    if e.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSpectrum("energies must be ascending".into()));
    }
    if !(1..d - 1).any(|k| e[k + 1] > e[k]) {
        return Err(Error::InvalidSpectrum("spectrum is fully degenerate above the ground level".into()));
    }
    if i < 1 || i + 1 >= d || e[i + 1] <= e[i] {
        return Err(Error::InvalidIndex(format!("level {i} needs 1 <= i <= d-2 and E_(i+1) > E_i")));
    }
    let s = SystemSpec::diagonal("S", e, beta)?;
    let sp = SystemSpec::diagonal("S'", &energies[..dp], beta)?;
    let (p, m) = plus_minus::<R>(d, i, i + 1);
    let plus = PureState::new(p.clone(), &s)?.density();
    let minus = PureState::new(m.clone(), &s)?.density();
    let ket0 = PureState::basis(0, &sp)?.density();
    let ket1 = PureState::basis(1, &sp)?.density();
    let tau_s = s.gibbs_state();
    let tau_sp = sp.gibbs_state();
    let rest: Vec<Vec<C<R>>> = (0..d).filter(|&k| k != i && k != i + 1).map(|k| basis(d, k)).collect();
    let rest_weight: R = rest.iter().map(|v| tau_s.matrix().sandwich(v, v).map(|z| z.re)).sum::<Result<R>>()?;
    let eta_m = (&(tau_sp.matrix() - &ket0.matrix().scale(plus.overlap(&tau_s))) - &ket1.matrix().scale(minus.overlap(&tau_s)))
        .scale(R::one() / rest_weight);
    let eta = feasible(eta_m, &sp)?;
    let channel = QuantumChannel::measure_prepare(
        &s,
        &sp,
        &[(vec![p], ket0.clone()), (vec![m], ket1.clone()), (rest, eta.clone())],
    )?;
    let recovery = QuantumChannel::measure_prepare(
        &sp,
        &s,
        &[
            (vec![basis(dp, 0)], plus.clone()),
            ((1..dp).map(|k| basis(dp, k)).collect(), minus.clone()),
        ],
    )?;
    let pair = ReversiblePair::new(plus, minus, Some(recovery))?;
    Ok(ConstructionResult::new(channel, Some(pair))
        .with("C", (e[i + 1] - e[i]) / R::lit(2.0))
        .with("eta_min_eigenvalue", eta.min_eigenvalue()))
}

/// Output of [`state_transition_channel`].
#[derive(Clone, Debug)]
pub struct StateTransition<R: Real> {
    pub result: ConstructionResult<R>,
    pub eta_plus: PureState<R>,
    pub eta_minus: PureState<R>,
    pub xi: DensityOperator<R>,
}

/// Channel `Λ₀` sending `|η₊> = √r|i> + √(1−r)|j>` to `|i'>`, with the
/// orthogonal partner `|η₋> = √(1−r)|i> − √r|j>`; metadata `C² = r(1−r)(E_i − E_j)²`.
pub fn state_transition_channel<R: Real>(
    s: &SystemSpec<R>,
    sp: &SystemSpec<R>,
    i: usize,
    j: usize,
    ip: usize,
) -> Result<StateTransition<R>> {
    let inputs = ordered_weight_inputs(s, sp, i, j, ip)?;
    let r = inputs.r;
    let mut minus = vec![C::zero(); s.dim()];
    minus[i] = c((R::one() - r).sqrt());
    minus[j] = c(-r.sqrt());
    let eta_minus = PureState::normalized(minus, s)?;
    let mut result = general_pairwise_channel_at(&inputs.psi, &inputs.phi, i, j)?;
    // Same states as the generic ψ⊥, rebuilt here so the pair carries η₋ literally.
    let recovery = result.pair.as_ref().and_then(|p| p.recovery().cloned());
    result.pair = Some(ReversiblePair::new(inputs.psi.density(), eta_minus.density(), recovery)?);

    let xi = result.channel.apply(&eta_minus.density())?;
    let e = s.energies();
    let c2 = r * (R::one() - r) * (e[i] - e[j]).powi(2);
    let result = result.with("r", r).with("C2", c2);
    Ok(StateTransition { result, eta_plus: inputs.psi, eta_minus, xi })
}
