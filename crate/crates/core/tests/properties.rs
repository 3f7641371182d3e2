mod common;

use coherence_cost::certify::{
    channel_purified_distance, compute_c, delta_with_recovery, log_points, lower_bound_curve, optimize_recovery,
    DeltaOptions, DistanceOptions,
};
use coherence_cost::channels::{compose, is_covariant, Dilation, QuantumChannel};
use coherence_cost::constructions::{
    adjacent_level_channel, coherent_measurement_channel, faist_channel, general_pairwise_channel,
    ordered_weight_inputs, state_transition_channel, tightness_example, ConstructionResult, ReversiblePair,
};
use coherence_cost::quantum::{d_max, d_min, purified_distance, DensityOperator, PureState, SystemSpec};
use coherence_cost::sampling::{random_kraus, Sampler};
use common::*;
use proptest::prelude::*;

fn qubit_channel(s: &mut Sampler, n_kraus: usize) -> QuantumChannel<f64> {
    let q = SystemSpec::trivial("Q", 2, 1.0).unwrap();
    QuantumChannel::new(random_kraus(s, 2, 2, n_kraus), &q, &q).unwrap()
}

fn all_constructions(seed: u64) -> Vec<ConstructionResult<f64>> {
    let mut s = Sampler::new(seed);
    let mut out = vec![
        coherent_measurement_channel(0.3).unwrap(),
        coherent_measurement_channel(4.0).unwrap(),
        adjacent_level_channel(3, 3, &[0.0, 1.0, 2.0], 1, 1.0).unwrap(),
        adjacent_level_channel(4, 3, &[0.0, 0.4, 1.1, 2.0], 1, 2.0).unwrap(),
        tightness_example(0.7).unwrap().result,
    ];
    for _ in 0..3 {
        let t = random_ordered_tuple(&mut s, 4);
        let inputs = ordered_weight_inputs(&t.s, &t.sp, t.i, t.j, t.ip).unwrap();
        out.push(general_pairwise_channel(&inputs.psi, &inputs.phi).unwrap());
        out.push(state_transition_channel(&t.s, &t.sp, t.i, t.j, t.ip).unwrap().result);
    }
    out
}

#[test]
fn constructions_meet_their_obligations() {
    for (n, r) in all_constructions(11).iter().enumerate() {
        let o = r.obligations().unwrap();
        assert!(o.hold(1e-9, 1e-8), "construction {n}: {o:?}");
        let pair = r.pair.as_ref().unwrap();
        let est = delta_with_recovery(&r.channel, pair, &DeltaOptions::default()).unwrap();
        assert!(est.is_exact_zero, "construction {n}: delta {}", est.value);
    }
}

#[test]
fn general_construction_reproduces_coherent_measurement() {
    for beta in [0.1f64, 1.0, 10.0] {
        let s = SystemSpec::qubit("S", 1.0, beta).unwrap();
        let sp = SystemSpec::trivial("S'", 2, beta).unwrap();
        let inputs = ordered_weight_inputs(&s, &sp, 1, 0, 0).unwrap();
        assert!((inputs.r - 0.5).abs() < 1e-12);
        let general = general_pairwise_channel(&inputs.psi, &inputs.phi).unwrap();
        let reference = coherent_measurement_channel(beta).unwrap();
        assert!(general.channel.choi_distance(&reference.channel).unwrap() <= 1e-9);
    }
}

#[test]
fn ordered_weight_tuples_meet_preconditions() {
    let mut s = Sampler::new(30);
    for _ in 0..30 {
        let t = random_ordered_tuple(&mut s, 5);
        let inputs = ordered_weight_inputs(&t.s, &t.sp, t.i, t.j, t.ip).unwrap();
        assert!(inputs.r > 0.0 && inputs.r < 1.0);
        let a = d_min(&inputs.psi, &t.s.gibbs_state()).unwrap();
        let b = d_min(&inputs.phi, &t.sp.gibbs_state()).unwrap();
        let c = d_max(&inputs.phi.density(), &t.sp.gibbs_state()).unwrap();
        assert!((a - b).abs() <= 1e-9 && (b - c).abs() <= 1e-9, "{a} {b} {c}");
    }
}

#[test]
fn recovery_search_on_depolarizing_matches_grid() {
    // Every recovery sends I/2 to a fixed state, so a grid over that state is exhaustive.
    let s = SystemSpec::trivial("S", 2, 1.0).unwrap();
    let depol = QuantumChannel::replacer(&s, &DensityOperator::maximally_mixed(&s)).unwrap();
    let psi = PureState::new(vec![cx(0.6, 0.0), cx(0.0, 0.8)], &s).unwrap();
    let perp = PureState::new(vec![cx(0.0, 0.8), cx(0.6, 0.0)], &s).unwrap();
    let pair = ReversiblePair::new(psi.density(), perp.density(), None).unwrap();
    let est = optimize_recovery(&depol, &pair, &DeltaOptions::default()).unwrap();

    let mut oracle = f64::INFINITY;
    let n = 24;
    for ir in 0..=n {
        for it in 0..=n {
            for ip in 0..2 * n {
                let (r, th, ph) = (
                    ir as f64 / n as f64,
                    std::f64::consts::PI * it as f64 / n as f64,
                    std::f64::consts::PI * ip as f64 / n as f64,
                );
                let (x, y, z) = (r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos());
                let m = M::from_rows(&[
                    vec![cx((1.0 + z) / 2.0, 0.0), cx(x / 2.0, -y / 2.0)],
                    vec![cx(x / 2.0, y / 2.0), cx((1.0 - z) / 2.0, 0.0)],
                ])
                .unwrap();
                let omega = DensityOperator::new_tol(m, &s, 1e-9).unwrap();
                let d1 = purified_distance(&psi.density(), &omega).unwrap();
                let d2 = purified_distance(&perp.density(), &omega).unwrap();
                oracle = oracle.min(((d1 * d1 + d2 * d2) / 2.0).sqrt());
            }
        }
    }
    assert!((oracle - 0.5f64.sqrt()).abs() < 1e-9);
    assert!(est.value >= oracle - 1e-9, "{} below exhaustive minimum {oracle}", est.value);
    assert!(est.value <= oracle + 1e-6, "{} vs {oracle}", est.value);
}

#[test]
fn lower_curve_is_monotone_and_diverges() {
    let eps: Vec<f64> = log_points(1e-6, 10.0, 120);
    let curve = lower_bound_curve(0.5, 1.0, 0.25, &eps);
    assert!(curve.windows(2).all(|w| w[0] >= w[1]));
    let halves: Vec<f64> = eps.iter().map(|e| e / 2.0).collect();
    let at_half = lower_bound_curve(0.5, 1.0, 0.25, &halves);
    assert!(at_half.iter().zip(&curve).all(|(h, c)| h >= c));
    assert!(curve[0] > 1e5);
}

#[test]
fn thermal_dilations_are_covariant() {
    let mut s = Sampler::new(12);
    let es = [0.0, 1.0];
    let ee = [0.0, 1.0, 2.0];
    let sys = SystemSpec::diagonal("S", &es, 0.8).unwrap();
    let env = SystemSpec::diagonal("E", &ee, 0.8).unwrap();
    for _ in 0..5 {
        let u = energy_conserving_unitary(&mut s, &es, &ee);
        let ch = Dilation::new(&sys, &env, &sys, &env, u, env.gibbs_state()).unwrap().channel().unwrap();
        assert!(is_covariant(&ch, 1e-9).covariant);
    }
}

#[test]
fn coherent_resource_breaks_covariance() {
    let s = SystemSpec::qubit("S", 1.0, 3.0).unwrap();
    let plus = PureState::from_real(&[1.0, 1.0], &s).unwrap().density();
    let r = faist_channel(&s, &plus).unwrap();
    let v = is_covariant(&r.channel, 1e-9);
    assert!(!v.covariant && v.sector_defect > 1e-3 && v.grid_defect > 1e-3);
}

#[test]
fn single_precision_smoke() {
    let r = coherent_measurement_channel(1.0f32).unwrap();
    let pair = r.pair.as_ref().unwrap();
    assert!((compute_c(&r.channel, pair).unwrap() - 0.5).abs() < 1e-5);
    assert!(r.obligations().unwrap().hold(1e-4, 1e-3));
    let t = tightness_example(1.0f32).unwrap();
    let gap = coherence_cost::linalg::spectral_spread(&t.dilation.energy_change_operator()).unwrap();
    assert!((gap - 1.0).abs() < 1e-4);
    let curve = lower_bound_curve(0.5f32, 1.0, 0.0, &[0.01]);
    assert!((curve[0] - 49.0).abs() < 1e-3);
}

#[test]
fn purification_probe_matches_grid_parametrization() {
    // The oracle's purification convention agrees with the library's reference ordering.
    let mut s = Sampler::new(13);
    let a = qubit_channel(&mut s, 2);
    let b = qubit_channel(&mut s, 3);
    let phi = bloch_purification(0.3, -0.2, 0.5);
    let ea = a.tensor_with_identity(2).unwrap();
    let eb = b.tensor_with_identity(2).unwrap();
    let p = M::projector(&phi);
    let fa = ea.apply_matrix(&p).unwrap();
    assert!(fa.approx_eq(&extended_output(a.kraus(), &phi, 2), 1e-12));
    let fb = eb.apply_matrix(&p).unwrap();
    assert!(fb.approx_eq(&extended_output(b.kraus(), &phi, 2), 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn distance_is_symmetric(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = qubit_channel(&mut s, 2);
        let b = qubit_channel(&mut s, 2);
        let opts = DistanceOptions { seed, ..Default::default() };
        let ab = channel_purified_distance(&a, &b, &opts).unwrap();
        let ba = channel_purified_distance(&b, &a, &opts).unwrap();
        prop_assert!((ab.estimate - ba.estimate).abs() <= 1e-6, "{} vs {}", ab.estimate, ba.estimate);
        prop_assert!(ab.estimate >= ab.lower);
    }

    #[test]
    fn distance_vanishes_only_for_equal_channels(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = qubit_channel(&mut s, 2);
        let opts = DistanceOptions { seed, ..Default::default() };
        prop_assert!(channel_purified_distance(&a, &a, &opts).unwrap().estimate <= 1e-6);
        let b = qubit_channel(&mut s, 2);
        if a.choi_distance(&b).unwrap() > 1e-8 {
            prop_assert!(channel_purified_distance(&a, &b, &opts).unwrap().estimate > 1e-6);
        }
    }

    #[test]
    fn distance_obeys_data_processing(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = qubit_channel(&mut s, 2);
        let b = qubit_channel(&mut s, 2);
        let post = qubit_channel(&mut s, 2);
        let opts = DistanceOptions { seed, ..Default::default() };
        let before = channel_purified_distance(&a, &b, &opts).unwrap().estimate;
        let after = channel_purified_distance(
            &compose(&post, &a).unwrap(),
            &compose(&post, &b).unwrap(),
            &opts,
        )
        .unwrap()
        .estimate;
        prop_assert!(after <= before + 1e-6, "{after} > {before}");
    }

    #[test]
    fn c_is_shift_invariant(seed in any::<u64>(), shift in -20.0f64..20.0) {
        for r in all_constructions(seed).iter().take(7) {
            let pair = r.pair.as_ref().unwrap();
            let base = compute_c(&r.channel, pair).unwrap();
            let ch = &r.channel;
            let moved = ch.with_systems(&ch.input().shifted(shift), &ch.output().shifted(shift)).unwrap();
            prop_assert!((compute_c(&moved, pair).unwrap() - base).abs() <= 1e-10);
        }
    }
}
