//! Acceptance criteria, one PASS/FAIL line each.
//! Run with `cargo test -p coherence-cost --test acceptance -- --nocapture` to see the lines.

mod common;

use coherence_cost::certify::{
    channel_purified_distance, compute_c, delta_at, log_points, lower_bound_curve, tightness_report, tradeoff_check,
    DistanceOptions,
};
use coherence_cost::channels::{compose, Dilation, QuantumChannel};
use coherence_cost::constructions::{
    adjacent_level_channel, coherent_measurement_channel, faist_channel, faist_dilations, general_pairwise_channel,
    ordered_weight_inputs, state_transition_channel, tightness_example,
};
use coherence_cost::linalg::{eigh, spectral_spread, ComplexMatrix};
use coherence_cost::quantum::{d_max, d_min, qfi, trace_norm_distance, DensityOperator, PureState, SystemSpec};
use coherence_cost::sampling::{random_density, random_hermitian, random_kraus, random_pure, random_unitary, Sampler};
use common::*;

type Outcome = Result<String, String>;
type Suite = (&'static str, fn() -> Result<(), String>);
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn criterion_1() -> Outcome {
    let r = coherent_measurement_channel(1.0f64).map_err(|e| e.to_string())?;
    let pair = r.pair.as_ref().ok_or("missing pair")?;
    let c = compute_c(&r.channel, pair).map_err(|e| e.to_string())?;
    ensure((c - 0.5).abs() <= 1e-12, || format!("C = {c}"))?;

    let tau = r.channel.input().gibbs_state();
    let out = r.channel.apply(&tau).map_err(|e| e.to_string())?;
    let half = ComplexMatrix::diag_real(&[0.5, 0.5]);
    let gibbs = trace_norm_distance(out.matrix(), &half);
    ensure(gibbs <= 1e-10, || format!("Gibbs residual {gibbs:e}"))?;

    let recovery = pair.recovery().ok_or("missing recovery")?;
    let delta = delta_at(&r.channel, pair, recovery).map_err(|e| e.to_string())?.value;
    ensure(delta <= 1e-10, || format!("delta {delta:e}"))?;
    Ok(format!("C = {c}, Gibbs residual {gibbs:.1e}, delta {delta:.1e}"))
}

fn criterion_2() -> Outcome {
    let eps: Vec<f64> = log_points(1e-3, 1.0, 100);
    let mut worst = 0.0f64;
    for a in [0.1, 1.0, 10.0] {
        let t = tightness_example(a).map_err(|e| e.to_string())?;
        let gap = spectral_spread(&t.dilation.energy_change_operator()).map_err(|e| e.to_string())?;
        let expected_gap = 2f64.sqrt() * (a / 2f64.sqrt());
        ensure((gap - expected_gap).abs() <= 1e-10, || format!("a = {a}: gap {gap} vs {expected_gap}"))?;
        let pair = t.result.pair.as_ref().ok_or("missing pair")?;
        let c = compute_c(&t.result.channel, pair).map_err(|e| e.to_string())?;
        let expected_c = (a / 2f64.sqrt()) / 2.0;
        ensure((c - expected_c).abs() <= 1e-10, || format!("a = {a}: C {c} vs {expected_c}"))?;
        let report = tightness_report(a, &eps).map_err(|e| e.to_string())?;
        ensure(report.violations.is_empty(), || format!("a = {a}: {:?}", report.violations))?;
        let upper = report.upper.as_ref().ok_or("no upper curve")?;
        let bad = report.lower.iter().zip(upper).filter(|(l, u)| l > u).count();
        ensure(bad == 0, || format!("a = {a}: {bad} points with lower > upper"))?;
        worst = worst.max((gap - expected_gap).abs()).max((c - expected_c).abs());
    }
    Ok(format!("a in {{0.1, 1, 10}}, 100 grid points each, max closed-form error {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let r = coherent_measurement_channel(1.0f64).map_err(|e| e.to_string())?;
    let c = compute_c(&r.channel, r.pair.as_ref().ok_or("missing pair")?).map_err(|e| e.to_string())?;
    let dhs = spectral_spread(r.channel.input().hamiltonian()).map_err(|e| e.to_string())?;
    let dhsp = spectral_spread(r.channel.output().hamiltonian()).map_err(|e| e.to_string())?;
    let eps: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
    let curve = lower_bound_curve(c, dhs, dhsp, &eps);
    let mut worst = 0.0f64;
    for (k, v) in (1..=6).zip(&curve) {
        let expected = 0.5 * 10f64.powi(k) - 1.0;
        let e = rel_err(*v, expected);
        ensure(e <= 1e-6, || format!("k = {k}: {v} vs {expected}"))?;
        worst = worst.max(e);
    }
    Ok(format!("lower bound at 1e-6 is {}, max relative error {worst:.1e}", curve[5]))
}

fn criterion_4() -> Outcome {
    let mut s = Sampler::new(404);
    for n in 0..30 {
        let t = random_ordered_tuple(&mut s, 5);
        let inputs = ordered_weight_inputs(&t.s, &t.sp, t.i, t.j, t.ip).map_err(|e| format!("tuple {n}: {e}"))?;
        let tau_s = t.s.gibbs_state();
        let tau_sp = t.sp.gibbs_state();
        let dmin_psi = d_min(&inputs.psi, &tau_s).map_err(|e| e.to_string())?;
        let dmin_phi = d_min(&inputs.phi, &tau_sp).map_err(|e| e.to_string())?;
        let dmax_phi = d_max(&inputs.phi.density(), &tau_sp).map_err(|e| e.to_string())?;
        ensure((dmin_psi - dmin_phi).abs() <= 1e-9, || format!("tuple {n}: D_min {dmin_psi} vs {dmin_phi}"))?;
        ensure((dmin_phi - dmax_phi).abs() <= 1e-9, || format!("tuple {n}: D_min {dmin_phi} vs D_max {dmax_phi}"))?;

        // Closed forms from the Gibbs weights.
        let w = gibbs_weights(&t.s.energies(), t.beta);
        let wp = gibbs_weights(&t.sp.energies(), t.beta);
        let r = (wp[t.ip] - w[t.j]) / (w[t.i] - w[t.j]);
        ensure((inputs.r - r).abs() <= 1e-12, || format!("tuple {n}: r {} vs {r}", inputs.r))?;
        ensure((dmin_phi + wp[t.ip].log2()).abs() <= 1e-9, || format!("tuple {n}: D_min(phi) off closed form"))?;

        let built = general_pairwise_channel(&inputs.psi, &inputs.phi).map_err(|e| format!("tuple {n}: {e}"))?;
        let cert = built.channel.validate();
        ensure(cert.is_cptp(), || format!("tuple {n}: not CPTP {cert:?}"))?;
        let g = built.channel.is_gibbs_preserving(1e-9);
        ensure(g.preserving, || format!("tuple {n}: Gibbs residual {:e}", g.residual))?;

        let mut perp = vec![cx(0.0, 0.0); t.s.dim()];
        perp[t.i] = cx((1.0 - r).sqrt(), 0.0);
        perp[t.j] = cx(-r.sqrt(), 0.0);
        let perp = PureState::new(perp, &t.s).map_err(|e| e.to_string())?;
        let eta = built.channel.apply(&perp.density()).map_err(|e| e.to_string())?;
        let min_eig = eigh(eta.matrix()).map_err(|e| e.to_string())?.min();
        ensure(min_eig >= -1e-10, || format!("tuple {n}: eta min eigenvalue {min_eig:e}"))?;
        let tr_phi_eta = inputs.phi.density().overlap(&eta);
        ensure(tr_phi_eta <= 1e-9, || format!("tuple {n}: Tr(phi eta) = {tr_phi_eta:e}"))?;
        let c = compute_c(&built.channel, built.pair.as_ref().ok_or("missing pair")?).map_err(|e| e.to_string())?;
        ensure(c > 0.0, || format!("tuple {n}: C = {c}"))?;
    }
    Ok("30 random tuples with d_S, d_S' <= 5 and beta in [0.1, 10]".into())
}

fn criterion_5() -> Outcome {
    let mut s = Sampler::new(505);
    let mut worst = 0.0f64;
    for n in 0..10 {
        let t = random_ordered_tuple(&mut s, 5);
        let st = state_transition_channel(&t.s, &t.sp, t.i, t.j, t.ip).map_err(|e| format!("tuple {n}: {e}"))?;
        let w = gibbs_weights(&t.s.energies(), t.beta);
        let wp = gibbs_weights(&t.sp.energies(), t.beta);
        let r = (wp[t.ip] - w[t.j]) / (w[t.i] - w[t.j]);
        let e = t.s.energies();
        let expected = r * (1.0 - r) * (e[t.i] - e[t.j]).powi(2);
        let pair = st.result.pair.as_ref().ok_or("missing pair")?;
        let c = compute_c(&st.result.channel, pair).map_err(|e| e.to_string())?;
        let err = rel_err(c * c, expected);
        ensure(err <= 1e-10, || format!("tuple {n}: C^2 {} vs {expected}", c * c))?;
        worst = worst.max(err);

        let image = st.result.channel.apply(&st.eta_plus.density()).map_err(|e| e.to_string())?;
        let target = PureState::basis(t.ip, &t.sp).map_err(|e| e.to_string())?.density();
        let dist = trace_norm_distance(image.matrix(), target.matrix());
        ensure(dist <= 1e-10, || format!("tuple {n}: Lambda0(eta+) off |i'> by {dist:e}"))?;
    }
    Ok(format!("10 random tuples, max relative C^2 error {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let s = SystemSpec::qubit("S", 1.0, 2.0).map_err(|e| e.to_string())?;
    let tau = s.gibbs_state();
    let mut sampler = Sampler::new(606);
    let random = DensityOperator::new(random_density(&mut sampler, 2), &s).map_err(|e| e.to_string())?;
    let blend = DensityOperator::new(&tau.matrix().scale(0.8) + &random.matrix().scale(0.2), &s).map_err(|e| e.to_string())?;
    let etas = [
        PureState::from_real(&[1.0, 1.0], &s).map_err(|e| e.to_string())?.density(),
        PureState::basis(0, &s).map_err(|e| e.to_string())?.density(),
        blend,
    ];
    let mut worst_choi = 0.0f64;
    for (n, eta) in etas.iter().enumerate() {
        let target = faist_channel(&s, eta).map_err(|e| format!("eta {n}: {e}"))?;
        let ground = PureState::basis(0, &s).map_err(|e| e.to_string())?.density();
        let sigma = target.channel.apply(&ground).map_err(|e| e.to_string())?;
        let d = faist_dilations(eta, &sigma).map_err(|e| format!("eta {n}: {e}"))?;
        for (label, dil) in [("first", &d.first), ("second", &d.second)] {
            let defect = dil.energy_conservation_defect();
            ensure(defect <= 1e-10, || format!("eta {n}: {label} defect {defect:e}"))?;
        }
        ensure(
            d.first.environment().hamiltonian().max_abs() == 0.0 && d.second.input().hamiltonian().max_abs() == 0.0,
            || "classical register must carry H_E = 0".into(),
        )?;
        let first = d.first.channel().map_err(|e| e.to_string())?;
        let second = d.second.channel().map_err(|e| e.to_string())?;
        let composed = compose(&second, &first).map_err(|e| e.to_string())?;
        let dist = composed.choi_distance(&target.channel).map_err(|e| e.to_string())?;
        ensure(dist <= 1e-9, || format!("eta {n}: composition off by {dist:e}"))?;
        worst_choi = worst_choi.max(dist);
        let joint = qfi(&sigma.tensor(eta).map_err(|e| e.to_string())?);
        let sum = qfi(eta) + qfi(&sigma);
        ensure((sum - d.cost_upper).abs() <= 1e-12, || format!("eta {n}: cost_upper {}", d.cost_upper))?;
        ensure((sum - joint).abs() <= 1e-8 * joint.abs().max(1.0), || format!("eta {n}: QFI {sum} vs joint {joint}"))?;
    }
    Ok(format!("3 resource choices, max Choi distance {worst_choi:.1e}"))
}

fn qfi_commuting() -> std::result::Result<(), String> {
    let mut s = Sampler::new(7001);
    for n in 0..50 {
        let d = 2 + s.index(4);
        let u = random_unitary::<f64>(&mut s, d);
        let energies: Vec<f64> = (0..d).map(|_| s.uniform(-2.0, 2.0)).collect();
        let mut probs: Vec<f64> = (0..d).map(|_| s.uniform(0.0, 1.0)).collect();
        let z: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= z);
        let h = &(&u * &ComplexMatrix::diag_real(&energies)) * &u.adjoint();
        let rho = &(&u * &ComplexMatrix::diag_real(&probs)) * &u.adjoint();
        let sys = SystemSpec::new("S", h.hermitian_part(), 1.0).map_err(|e| e.to_string())?;
        let state = DensityOperator::new(rho.hermitian_part(), &sys).map_err(|e| e.to_string())?;
        let f = qfi(&state);
        ensure(f.abs() <= 1e-10, || format!("commuting sample {n}: QFI {f:e}"))?;
    }
    for n in 0..50 {
        let d = 2 + s.index(4);
        let h = random_hermitian::<f64>(&mut s, d);
        let rho = random_density::<f64>(&mut s, d);
        let comm = h.commutator(&rho).map_err(|e| e.to_string())?.frobenius();
        let sys = SystemSpec::new("S", h, 1.0).map_err(|e| e.to_string())?;
        let f = qfi(&DensityOperator::new(rho, &sys).map_err(|e| e.to_string())?);
        ensure(comm > 1e-6 && f > 1e-10, || format!("non-commuting sample {n}: QFI {f:e}, commutator {comm:e}"))?;
    }
    Ok(())
}

fn qfi_pure_variance() -> std::result::Result<(), String> {
    let mut s = Sampler::new(7002);
    for n in 0..20 {
        let d = 2 + s.index(5);
        let h = random_hermitian::<f64>(&mut s, d);
        let psi = random_pure::<f64>(&mut s, d);
        let hpsi = h.mul_vec(&psi).map_err(|e| e.to_string())?;
        let mean: f64 = psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum();
        let second: f64 = hpsi.iter().map(|z| z.norm_sqr()).sum();
        let var = second - mean * mean;
        let sys = SystemSpec::new("S", h, 1.0).map_err(|e| e.to_string())?;
        let f = qfi(&PureState::new(psi, &sys).map_err(|e| e.to_string())?.density());
        ensure(rel_err(f, 4.0 * var) <= 1e-8, || format!("sample {n}: QFI {f} vs 4 Var {}", 4.0 * var))?;
    }
    Ok(())
}

fn c_shift_invariance() -> std::result::Result<(), String> {
    let mut s = Sampler::new(7003);
    let mut cases = vec![
        coherent_measurement_channel(1.0f64).map_err(|e| e.to_string())?,
        adjacent_level_channel(3, 3, &[0.0, 1.0, 2.0], 1, 1.0).map_err(|e| e.to_string())?,
        adjacent_level_channel(4, 3, &[0.0, 0.5, 1.5, 2.5], 2, 0.7).map_err(|e| e.to_string())?,
        tightness_example(3.0).map_err(|e| e.to_string())?.result,
    ];
    for _ in 0..4 {
        let t = random_ordered_tuple(&mut s, 4);
        cases.push(state_transition_channel(&t.s, &t.sp, t.i, t.j, t.ip).map_err(|e| e.to_string())?.result);
    }
    for (n, case) in cases.iter().enumerate() {
        let pair = case.pair.as_ref().ok_or("missing pair")?;
        let base = compute_c(&case.channel, pair).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let shift = s.uniform(-50.0, 50.0);
            let ch = &case.channel;
            let moved =
                ch.with_systems(&ch.input().shifted(shift), &ch.output().shifted(shift)).map_err(|e| e.to_string())?;
            let c = compute_c(&moved, pair).map_err(|e| e.to_string())?;
            ensure((c - base).abs() <= 1e-10, || format!("case {n}, shift {shift}: {c} vs {base}"))?;
        }
    }
    Ok(())
}

fn duality() -> std::result::Result<(), String> {
    let mut s = Sampler::new(7004);
    for n in 0..50 {
        let (din, dout) = (1 + s.index(4), 1 + s.index(4));
        let sin = SystemSpec::trivial("A", din, 1.0).map_err(|e| e.to_string())?;
        let sout = SystemSpec::trivial("B", dout, 1.0).map_err(|e| e.to_string())?;
        let n_kraus = din + s.index(3);
        let ch = QuantumChannel::new(random_kraus(&mut s, din, dout, n_kraus), &sin, &sout)
            .map_err(|e| e.to_string())?;
        let x = coherence_cost::sampling::random_matrix::<f64>(&mut s, din, din);
        let a = coherence_cost::sampling::random_matrix::<f64>(&mut s, dout, dout);
        let lhs = a.hs_inner(&ch.apply_matrix(&x).map_err(|e| e.to_string())?);
        let rhs = ch.dual_apply(&a).map_err(|e| e.to_string())?.hs_inner(&x);
        ensure((lhs - rhs).norm() <= 1e-10, || format!("pair {n}: {lhs} vs {rhs}"))?;
    }
    Ok(())
}

fn distance_grid_oracle() -> std::result::Result<(), String> {
    let mut s = Sampler::new(7005);
    let q = SystemSpec::trivial("Q", 2, 1.0).map_err(|e| e.to_string())?;
    for n in 0..3 {
        let a = QuantumChannel::new(random_kraus(&mut s, 2, 2, 2), &q, &q).map_err(|e| e.to_string())?;
        let b = QuantumChannel::new(random_kraus(&mut s, 2, 2, 2), &q, &q).map_err(|e| e.to_string())?;
        let est = channel_purified_distance(&a, &b, &DistanceOptions { seed: n, ..Default::default() })
            .map_err(|e| e.to_string())?;
        let oracle = qubit_distance_grid(&a, &b);
        ensure((est.estimate - oracle).abs() <= 1e-3, || format!("pair {n}: estimate {} vs grid {oracle}", est.estimate))?;
    }
    Ok(())
}

fn gibbs_environment_dilations() -> std::result::Result<(), String> {
    let mut s = Sampler::new(7006);
    let levels = [0.0, 0.5, 1.0, 1.5];
    for n in 0..20 {
        let beta = log_uniform(&mut s, 0.1, 5.0);
        let es: Vec<f64> = (0..2 + s.index(2)).map(|_| levels[s.index(4)]).collect();
        let ee: Vec<f64> = (0..2 + s.index(2)).map(|_| levels[s.index(4)]).collect();
        let sys = SystemSpec::diagonal("S", &es, beta).map_err(|e| e.to_string())?;
        let env = SystemSpec::diagonal("E", &ee, beta).map_err(|e| e.to_string())?;
        let u = energy_conserving_unitary(&mut s, &es, &ee);
        let dil = Dilation::new(&sys, &env, &sys, &env, u, env.gibbs_state()).map_err(|e| e.to_string())?;
        let ch = dil.channel().map_err(|e| e.to_string())?;
        let g = ch.is_gibbs_preserving(1e-8);
        ensure(g.preserving, || format!("sample {n}: Gibbs residual {:e}", g.residual))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let suites: [Suite; 6] = [
        ("QFI zero iff commuting", qfi_commuting),
        ("QFI of pure states", qfi_pure_variance),
        ("C shift invariance", c_shift_invariance),
        ("dual map identity", duality),
        ("channel distance grid oracle", distance_grid_oracle),
        ("Gibbs environment dilations", gibbs_environment_dilations),
    ];
    for (name, suite) in suites {
        suite().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("6 property suites".into())
}

fn criterion_8() -> Outcome {
    let r = coherent_measurement_channel(1.0f64).map_err(|e| e.to_string())?;
    let pair = r.pair.as_ref().ok_or("missing pair")?;
    let noise = QuantumChannel::replacer(r.channel.input(), &r.channel.output().gibbs_state()).map_err(|e| e.to_string())?;
    let mut worst_gap = f64::INFINITY;
    for (n, p) in [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9, 1.0].into_iter().enumerate() {
        let approx = QuantumChannel::mixture(p, &r.channel, &noise).map_err(|e| e.to_string())?;
        let t = tradeoff_check(&approx, &r.channel, pair, &DistanceOptions { seed: n as u64, ..Default::default() })
            .map_err(|e| e.to_string())?;
        ensure(t.holds && t.delta <= t.epsilon_hat.estimate + 1e-6, || {
            format!("p = {p}: delta {} vs estimate {}", t.delta, t.epsilon_hat.estimate)
        })?;
        worst_gap = worst_gap.min(t.epsilon_hat.estimate - t.delta);
    }
    Ok(format!("10 mixtures, smallest margin estimate - delta = {worst_gap:.2e}"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("coherent measurement channel", criterion_1),
        ("tightness example", criterion_2),
        ("divergence of the lower bound", criterion_3),
        ("ordered-weight preconditions", criterion_4),
        ("state transition channel", criterion_5),
        ("resource dilations", criterion_6),
        ("property suites", criterion_7),
        ("irreversibility versus channel distance", criterion_8),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", k + 1),
            Err(detail) => {
                println!("FAIL criterion {} ({name}): {detail}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
