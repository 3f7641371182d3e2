use super::distance::{channel_purified_distance_seeded, purification, ChannelDistance, DistanceOptions};
use crate::channels::QuantumChannel;
use crate::constructions::ReversiblePair;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Outcome of comparing an approximation's channel distance with `δ`.
#[derive(Clone, Debug)]
pub struct TradeoffCheck<R: Real> {
    /// Channel purified distance between the approximation and the target.
    pub epsilon_hat: ChannelDistance<R>,
    /// `δ` of the approximation evaluated at the pair's recovery.
    pub delta: R,
    /// `δ ≤ ε̂` up to a slack of `1e-6`.
    pub holds: bool,
}

const SLACK: f64 = 1e-6;

/// Checks `δ(Λ̃, P) ≤ ε̂` where `ε̂` estimates the distance of `approx` from
/// `target` and `δ` uses the recovery carried by `pair`.
///
/// The distance search is seeded with purifications of the pair states, so the
/// reported `lower` value already dominates `δ` whenever the recovery is exact
/// for `target`.
pub fn tradeoff_check<R: Real>(
    approx: &QuantumChannel<R>,
    target: &QuantumChannel<R>,
    pair: &ReversiblePair<R>,
    options: &DistanceOptions,
) -> Result<TradeoffCheck<R>> {
    let recovery = pair.recovery().ok_or(Error::MissingRecovery)?;
    let delta = super::delta_at(approx, pair, recovery)?.value;
    let seeds = pair.states().iter().map(|rho| purification(rho.matrix())).collect::<Result<Vec<_>>>()?;
    let epsilon_hat = channel_purified_distance_seeded(approx, target, options, &seeds)?;
    let holds = delta <= epsilon_hat.estimate + R::lit(SLACK);
    Ok(TradeoffCheck { epsilon_hat, delta, holds })
}
