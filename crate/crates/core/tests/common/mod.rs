#![allow(dead_code)]

use coherence_cost::channels::QuantumChannel;
use coherence_cost::linalg::{eigh, sqrtm, ComplexMatrix};
use coherence_cost::quantum::SystemSpec;
use coherence_cost::sampling::{random_unitary, Sampler};
use coherence_cost::C;

pub type M = ComplexMatrix<f64>;

/// Energy-basis systems with levels `i, j` on `S` and `ip` on `S'` such that
/// `τ_S[i] < τ_S'[ip] < τ_S[j]`.
pub struct OrderedTuple {
    pub s: SystemSpec<f64>,
    pub sp: SystemSpec<f64>,
    pub i: usize,
    pub j: usize,
    pub ip: usize,
    pub beta: f64,
}

pub fn log_uniform(s: &mut Sampler, lo: f64, hi: f64) -> f64 {
    s.uniform(lo.ln(), hi.ln()).exp()
}

pub fn random_ordered_tuple(s: &mut Sampler, max_dim: usize) -> OrderedTuple {
    loop {
        let beta = log_uniform(s, 0.1, 10.0);
        let ds = 2 + s.index(max_dim - 1);
        let dsp = 1 + s.index(max_dim);
        let es: Vec<f64> = (0..ds).map(|_| s.uniform(0.0, 3.0)).collect();
        let esp: Vec<f64> = (0..dsp).map(|_| s.uniform(0.0, 3.0)).collect();
        let sys = SystemSpec::diagonal("S", &es, beta).unwrap();
        let sysp = SystemSpec::diagonal("S'", &esp, beta).unwrap();
        let t = gibbs_weights(&es, beta);
        let tp = gibbs_weights(&esp, beta);
        let margin = 1e-3;
        let mut valid = Vec::new();
        for i in 0..ds {
            for j in 0..ds {
                for (ip, &w) in tp.iter().enumerate() {
                    if t[i] + margin < w && w + margin < t[j] {
                        valid.push((i, j, ip));
                    }
                }
            }
        }
        if valid.is_empty() {
            continue;
        }
        let (i, j, ip) = valid[s.index(valid.len())];
        return OrderedTuple { s: sys, sp: sysp, i, j, ip, beta };
    }
}

/// `e^{−βE_k} / Σ e^{−βE}` evaluated directly.
pub fn gibbs_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let w: Vec<f64> = energies.iter().map(|e| (-beta * e).exp()).collect();
    let z: f64 = w.iter().sum();
    w.iter().map(|x| x / z).collect()
}

pub fn cx(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

/// `Σ_k (1⊗K_k)|φ><φ|(1⊗K_k)†` with `φ` on `R⊗S`, built column by column.
pub fn extended_output(kraus: &[M], phi: &[C<f64>], d_ref: usize) -> M {
    let (dout, din) = (kraus[0].rows(), kraus[0].cols());
    let mut out = M::zeros(d_ref * dout, d_ref * dout);
    for k in kraus {
        let mut v = vec![cx(0.0, 0.0); d_ref * dout];
        for r in 0..d_ref {
            for o in 0..dout {
                let mut acc = cx(0.0, 0.0);
                for s in 0..din {
                    acc += k[(o, s)] * phi[r * din + s];
                }
                v[r * dout + o] = acc;
            }
        }
        for a in 0..v.len() {
            for b in 0..v.len() {
                out[(a, b)] += v[a] * v[b].conj();
            }
        }
    }
    out
}

pub fn root_fidelity(a: &M, b: &M) -> f64 {
    let sa = sqrtm(a).unwrap();
    let m = (&(&sa * b) * &sa).hermitian_part();
    eigh(&m).unwrap().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum::<f64>().min(1.0)
}

/// Canonical qubit purification of the Bloch vector `(x, y, z)`, `|r| ≤ 1`.
pub fn bloch_purification(x: f64, y: f64, z: f64) -> Vec<C<f64>> {
    let rho = M::from_rows(&[
        vec![cx((1.0 + z) / 2.0, 0.0), cx(x / 2.0, -y / 2.0)],
        vec![cx(x / 2.0, y / 2.0), cx((1.0 - z) / 2.0, 0.0)],
    ])
    .unwrap();
    let e = eigh(&rho).unwrap();
    let mut v = vec![cx(0.0, 0.0); 4];
    for k in 0..2 {
        let w = e.eigenvalues[k].max(0.0).sqrt();
        for (i, a) in e.vector(k).into_iter().enumerate() {
            v[k * 2 + i] = a * w;
        }
    }
    v
}

fn bloch_distance(a: &QuantumChannel<f64>, b: &QuantumChannel<f64>, r: f64, th: f64, ph: f64) -> f64 {
    let phi = bloch_purification(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos());
    let f = root_fidelity(&extended_output(a.kraus(), &phi, 2), &extended_output(b.kraus(), &phi, 2));
    (1.0 - f * f).max(0.0).sqrt()
}

/// Maximum of the output purified distance over pure inputs on a qubit and
/// its reference, by a dense grid over the reduced Bloch ball followed by
/// successive local grid refinements.
pub fn qubit_distance_grid(a: &QuantumChannel<f64>, b: &QuantumChannel<f64>) -> f64 {
    let (nr, nt, np) = (12, 28, 30);
    let mut best = (0.0, 0.0, 0.0, -1.0);
    for ir in 0..=nr {
        let r = ir as f64 / nr as f64;
        for it in 0..=nt {
            let th = std::f64::consts::PI * it as f64 / nt as f64;
            for ip in 0..np {
                let ph = 2.0 * std::f64::consts::PI * ip as f64 / np as f64;
                let v = bloch_distance(a, b, r, th, ph);
                if v > best.3 {
                    best = (r, th, ph, v);
                }
            }
        }
    }
    let mut span = (1.0 / nr as f64, std::f64::consts::PI / nt as f64, 2.0 * std::f64::consts::PI / np as f64);
    for _ in 0..30 {
        let center = best;
        for dr in -3..=3 {
            for dt in -3..=3 {
                for dp in -3..=3 {
                    let r = (center.0 + dr as f64 * span.0 / 3.0).clamp(0.0, 1.0);
                    let th = (center.1 + dt as f64 * span.1 / 3.0).clamp(0.0, std::f64::consts::PI);
                    let ph = center.2 + dp as f64 * span.2 / 3.0;
                    let v = bloch_distance(a, b, r, th, ph);
                    if v > best.3 {
                        best = (r, th, ph, v);
                    }
                }
            }
        }
        span = (span.0 * 0.6, span.1 * 0.6, span.2 * 0.6);
    }
    best.3
}

/// Unitary on `S⊗E` that is block diagonal in the eigenspaces of `H_S⊗1 + 1⊗H_E`.
pub fn energy_conserving_unitary(s: &mut Sampler, es: &[f64], ee: &[f64]) -> M {
    let n = es.len() * ee.len();
    let total: Vec<f64> = (0..n).map(|k| es[k / ee.len()] + ee[k % ee.len()]).collect();
    let mut u = M::zeros(n, n);
    let mut seen = vec![false; n];
    for k in 0..n {
        if seen[k] {
            continue;
        }
        let block: Vec<usize> = (0..n).filter(|&m| (total[m] - total[k]).abs() < 1e-12).collect();
        let w = random_unitary::<f64>(s, block.len());
        for (a, &ra) in block.iter().enumerate() {
            seen[ra] = true;
            for (b, &rb) in block.iter().enumerate() {
                u[(ra, rb)] = w[(a, b)];
            }
        }
    }
    u
}
