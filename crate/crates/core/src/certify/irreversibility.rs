use super::stiefel::{blocks, minimize, stack, DescentSettings};
use crate::channels::QuantumChannel;
use crate::constructions::ReversiblePair;
use crate::error::{Error, Result};
use crate::linalg::{sqrtm, trace_norm_polar, ComplexMatrix};
use crate::quantum::{purified_distance, DensityOperator};
use crate::sampling::{random_isometry, Sampler};
use crate::scalar::Real;

/// Upper bound on `δ(Λ, P)` together with the recovery that attains it.
#[derive(Clone, Debug)]
pub struct DeltaEstimate<R: Real> {
    pub value: R,
    pub recovery_used: QuantumChannel<R>,
    pub is_exact_zero: bool,
    /// `D_F(ρ_j, R∘Λ(ρ_j))` for both pair members.
    pub distances: [R; 2],
    /// False when the pair's own recovery was evaluated.
    pub optimized: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct DeltaOptions {
    pub seed: u64,
    /// Clamped to at least 5.
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self { seed: 0, restarts: 6, max_iter: 2000 }
    }
}

const EXACT_ZERO: f64 = 1e-7;

/// `√(½ Σ_j D_F(ρ_j, R∘Λ(ρ_j))²)` at a given recovery `R`.
pub fn delta_at<R: Real>(
    channel: &QuantumChannel<R>,
    pair: &ReversiblePair<R>,
    recovery: &QuantumChannel<R>,
) -> Result<DeltaEstimate<R>> {
    if recovery.input().dim() != channel.output().dim() || recovery.output().dim() != channel.input().dim() {
        return Err(Error::DimensionMismatch("recovery does not invert the channel's shape".into()));
    }
    let mut distances = [R::zero(); 2];
    for (slot, rho) in distances.iter_mut().zip(pair.states()) {
        let back = recovery.apply(&channel.apply(rho)?)?;
        *slot = purified_distance(rho, &back)?;
    }
    let value = ((distances[0].powi(2) + distances[1].powi(2)) / R::lit(2.0)).sqrt();
    Ok(DeltaEstimate {
        value,
        recovery_used: recovery.clone(),
        is_exact_zero: value <= R::lit(EXACT_ZERO),
        distances,
        optimized: false,
    })
}

/// Evaluates the pair's recovery when present, otherwise searches for one.
pub fn delta_with_recovery<R: Real>(
    channel: &QuantumChannel<R>,
    pair: &ReversiblePair<R>,
    options: &DeltaOptions,
) -> Result<DeltaEstimate<R>> {
    match pair.recovery() {
        Some(r) => delta_at(channel, pair, r),
        None => optimize_recovery(channel, pair, options),
    }
}

/// Per-state loss whose minimum over recoveries is zero exactly when the state
/// is recovered: the weight off `ψ` for pure states, `1 − F` otherwise.
enum Target<R: Real> {
    /// `1 − |ψ><ψ|`.
    Pure(ComplexMatrix<R>),
    /// `√ρ`.
    Mixed(ComplexMatrix<R>),
}

impl<R: Real> Target<R> {
    fn new(rho: &DensityOperator<R>) -> Result<Self> {
        Ok(match rho.pure_vector() {
            Some(psi) => {
                let d = psi.len();
                Target::Pure(&ComplexMatrix::identity(d) - &ComplexMatrix::projector(psi))
            }
            None => Target::Mixed(sqrtm(rho.matrix())?),
        })
    }

    /// Loss for Kraus operators `a` acting on `σ` (with square root `sqrt_sigma`),
    /// accumulating its derivative with respect to each `A_k` into `grads`.
    fn accumulate(
        &self,
        a: &[ComplexMatrix<R>],
        sigma: &ComplexMatrix<R>,
        sqrt_sigma: &ComplexMatrix<R>,
        grads: &mut [ComplexMatrix<R>],
    ) -> R {
        match self {
            Target::Pure(perp) => {
                let mut loss = R::zero();
                for (gk, ak) in grads.iter_mut().zip(a) {
                    let pa = perp * ak;
                    loss = loss + (&pa * sigma).hs_inner(ak).re;
                    *gk = &*gk + &(&pa * sigma).scale(R::lit(2.0));
                }
                loss
            }
            Target::Mixed(sqrt_rho) => {
                // F = ‖[√ρ A_1 √σ, …, √ρ A_K √σ]‖₁.
                let blocks: Vec<ComplexMatrix<R>> = a.iter().map(|ak| &(sqrt_rho * ak) * sqrt_sigma).collect();
                let rows = blocks[0].rows();
                let cols = blocks[0].cols();
                let row = ComplexMatrix::from_fn(rows, cols * blocks.len(), |i, j| blocks[j / cols][(i, j % cols)]);
                let (f, polar) = trace_norm_polar(&row);
                for (k, gk) in grads.iter_mut().enumerate() {
                    let wk = ComplexMatrix::from_fn(rows, cols, |i, j| polar[(i, k * cols + j)]);
                    *gk = &*gk - &(&(sqrt_rho * &wk) * sqrt_sigma);
                }
                R::one() - f
            }
        }
    }
}

/// Minimises the recovery loss over Kraus isometries from several seeded
/// starts and keeps the recovery with the smallest exact `δ`.
pub fn optimize_recovery<R: Real>(
    channel: &QuantumChannel<R>,
    pair: &ReversiblePair<R>,
    options: &DeltaOptions,
) -> Result<DeltaEstimate<R>> {
    let (ds, dsp) = (channel.input().dim(), channel.output().dim());
    let n_kraus = ds * dsp;
    let images: Vec<ComplexMatrix<R>> =
        pair.states().iter().map(|rho| channel.apply_matrix(rho.matrix())).collect::<Result<_>>()?;
    let roots: Vec<ComplexMatrix<R>> = images.iter().map(|m| sqrtm(&m.hermitian_part())).collect::<Result<_>>()?;
    let targets: Vec<Target<R>> = pair.states().iter().map(|rho| Target::new(rho)).collect::<Result<_>>()?;

    let loss = |w: &ComplexMatrix<R>| -> (R, ComplexMatrix<R>) {
        let a = blocks(w, ds);
        let mut total = R::zero();
        let mut grads = vec![ComplexMatrix::zeros(ds, dsp); a.len()];
        for ((sigma, root), target) in images.iter().zip(&roots).zip(&targets) {
            total = total + target.accumulate(&a, sigma, root, &mut grads);
        }
        (total, stack(&grads))
    };

    let settings = DescentSettings { max_iter: options.max_iter, grad_tol: R::epsilon() };
    let mut sampler = Sampler::new(options.seed);
    let mut best: Option<DeltaEstimate<R>> = None;
    for _ in 0..options.restarts.max(5) {
        let mut s = sampler.fork();
        let w0 = random_isometry::<R>(&mut s, n_kraus * ds, dsp);
        let (w, _) = minimize(w0, loss, &settings);
        let recovery = QuantumChannel::new(blocks(&w, ds), channel.output(), channel.input())?;
        let mut est = delta_at(channel, pair, &recovery)?;
        est.optimized = true;
        if best.as_ref().is_none_or(|b| est.value < b.value) {
            best = Some(est);
        }
    }
    Ok(best.expect("at least one restart"))
}
