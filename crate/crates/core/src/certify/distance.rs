use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{eigh, inner, tensor_vec, trace_norm_polar, vec_norm, ComplexMatrix};
use crate::sampling::{random_pure, Sampler};
use crate::scalar::{c, Real, C};

/// Witnessed and optimised values of `max_Φ D_F(id⊗Λ₁(Φ), id⊗Λ₂(Φ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelDistance<R: Real> {
    /// Best value over the fixed and sampled probe inputs.
    pub lower: R,
    /// Best value after local ascent from the probes; `≥ lower`.
    pub estimate: R,
    /// Input on `R⊗S` attaining `estimate`.
    pub witness: Vec<C<R>>,
}

#[derive(Clone, Copy, Debug)]
pub struct DistanceOptions {
    pub seed: u64,
    /// Haar-random probe inputs.
    pub samples: usize,
    /// Number of screened probes refined by a full ascent.
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self { seed: 0, samples: 64, restarts: 6, max_iter: 400 }
    }
}

struct Pair<R: Real> {
    a: QuantumChannel<R>,
    b: QuantumChannel<R>,
}

/// Images `K_k φ` of `phi` under each Kraus operator.
fn images<R: Real>(ch: &QuantumChannel<R>, phi: &[C<R>]) -> Vec<Vec<C<R>>> {
    ch.kraus().iter().map(|k| k.mul_vec(phi).expect("input on R⊗S")).collect()
}

impl<R: Real> Pair<R> {
    /// `Y_{kl} = <a_k|b_l>`, whose trace norm is the root fidelity of the outputs.
    fn overlaps(av: &[Vec<C<R>>], bv: &[Vec<C<R>>]) -> ComplexMatrix<R> {
        ComplexMatrix::from_fn(av.len(), bv.len(), |k, l| inner(&av[k], &bv[l]))
    }

    fn fidelity(&self, phi: &[C<R>]) -> R {
        let y = Self::overlaps(&images(&self.a, phi), &images(&self.b, phi));
        trace_norm_polar(&y).0.min(R::one())
    }

    fn distance(&self, phi: &[C<R>]) -> R {
        let f = self.fidelity(phi);
        (R::one() - f * f).max(R::zero()).sqrt()
    }

    /// `F` and its gradient on the unit sphere at `phi`.
    fn fidelity_grad(&self, phi: &[C<R>]) -> (R, Vec<C<R>>) {
        let av = images(&self.a, phi);
        let bv = images(&self.b, phi);
        let (f, w) = trace_norm_polar(&Self::overlaps(&av, &bv));
        let mut g = vec![C::new(R::zero(), R::zero()); phi.len()];
        for (k, ak) in self.a.kraus().iter().enumerate() {
            for (l, bl) in self.b.kraus().iter().enumerate() {
                let wkl = w[(k, l)];
                let x = ak.adjoint().mul_vec(&bv[l]).expect("shape");
                let y = bl.adjoint().mul_vec(&av[k]).expect("shape");
                for ((gi, xi), yi) in g.iter_mut().zip(x).zip(y) {
                    *gi = *gi + xi * wkl.conj() + yi * wkl;
                }
            }
        }
        let along = inner(phi, &g).re;
        let g = g.iter().zip(phi).map(|(x, y)| *x - *y * along).collect();
        (f, g)
    }
}

const SCREEN_ITER: usize = 25;

fn normalize<R: Real>(v: Vec<C<R>>) -> Vec<C<R>> {
    let n = vec_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Channel purified distance over pure inputs on `R⊗S` with `dim R = dim S`.
pub fn channel_purified_distance<R: Real>(
    a: &QuantumChannel<R>,
    b: &QuantumChannel<R>,
    options: &DistanceOptions,
) -> Result<ChannelDistance<R>> {
    channel_purified_distance_seeded(a, b, options, &[])
}

/// As [`channel_purified_distance`], also probing the given inputs on `R⊗S`.
pub fn channel_purified_distance_seeded<R: Real>(
    a: &QuantumChannel<R>,
    b: &QuantumChannel<R>,
    options: &DistanceOptions,
    seeds: &[Vec<C<R>>],
) -> Result<ChannelDistance<R>> {
    if a.input().dim() != b.input().dim() || a.output().dim() != b.output().dim() {
        return Err(Error::DimensionMismatch("channels of different shapes".into()));
    }
    let d = a.input().dim();
    if let Some(bad) = seeds.iter().find(|s| s.len() != d * d) {
        return Err(Error::DimensionMismatch(format!("probe of length {} on a {}-dimensional R⊗S", bad.len(), d * d)));
    }
    let pair = Pair { a: a.tensor_with_identity(d)?, b: b.tensor_with_identity(d)? };

    let mut probes: Vec<Vec<C<R>>> = seeds.iter().cloned().map(normalize).collect();
    let scale = R::one() / R::lit(d as f64).sqrt();
    probes.push((0..d * d).map(|k| if k / d == k % d { c(scale) } else { C::new(R::zero(), R::zero()) }).collect());
    for k in 0..d {
        probes.push(tensor_vec(&crate::linalg::basis(d, 0), &crate::linalg::basis(d, k)));
    }
    let mut sampler = Sampler::new(options.seed);
    for _ in 0..options.samples {
        probes.push(random_pure(&mut sampler, d * d));
    }

    let scores: Vec<R> = probes.iter().map(|p| pair.distance(p)).collect();
    let (top, lower) = scores
        .iter()
        .copied()
        .enumerate()
        .fold((0, R::zero()), |best, (k, v)| if v > best.1 { (k, v) } else { best });
    let mut estimate = lower;
    let mut witness = probes[top].clone();

    // Short ascent from every probe, then full refinement of the best few.
    let mut screened: Vec<(R, Vec<C<R>>)> =
        probes.into_iter().map(|p| descend(&pair, p, SCREEN_ITER)).map(|(p, v)| (v, p)).collect();
    screened.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    for (_, start) in screened.into_iter().take(options.restarts.max(1)) {
        let (phi, value) = descend(&pair, start, options.max_iter);
        if value > estimate {
            estimate = value;
            witness = phi;
        }
    }
    Ok(ChannelDistance { lower, estimate, witness })
}

/// Decreases the output fidelity by projected gradient steps on the sphere.
fn descend<R: Real>(pair: &Pair<R>, mut phi: Vec<C<R>>, max_iter: usize) -> (Vec<C<R>>, R) {
    let (mut f, mut g) = pair.fidelity_grad(&phi);
    let mut step = R::lit(0.1);
    let armijo = R::lit(0.3);
    for _ in 0..max_iter {
        let g2: R = g.iter().map(|z| z.norm_sqr()).sum();
        if g2.sqrt() <= R::epsilon() || f <= R::zero() {
            break;
        }
        let mut t = (step * R::lit(2.0)).min(R::one());
        let mut accepted = None;
        while t >= R::lit(1e-14) {
            let cand = normalize(phi.iter().zip(&g).map(|(x, y)| *x - *y * t).collect());
            let (fc, gc) = pair.fidelity_grad(&cand);
            if fc <= f - armijo * t * g2 {
                accepted = Some((cand, fc, gc));
                break;
            }
            t = t / R::lit(2.0);
        }
        match accepted {
            Some((cand, fc, gc)) => {
                phi = cand;
                f = fc;
                g = gc;
                step = t;
            }
            None => break,
        }
    }
    let value = pair.distance(&phi);
    (phi, value)
}

/// Canonical purification `Σ_k √λ_k |k>_R ⊗ |e_k>_S` of a state on `S`.
pub fn purification<R: Real>(rho: &ComplexMatrix<R>) -> Result<Vec<C<R>>> {
    let d = rho.ensure_square("state")?;
    let e = eigh(rho)?;
    let mut v = vec![C::new(R::zero(), R::zero()); d * d];
    for k in 0..d {
        let w = e.eigenvalues[k].max(R::zero()).sqrt();
        for (i, z) in e.vector(k).into_iter().enumerate() {
            v[k * d + i] = z * w;
        }
    }
    Ok(normalize(v))
}
