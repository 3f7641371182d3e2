//! Explicit Gibbs-preserving channels, reversible pairs and dilations.

mod dilations;
mod pairwise;

use std::collections::BTreeMap;

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::quantum::{purified_distance, DensityOperator};
use crate::scalar::Real;

pub use dilations::{faist_dilations, tightness_example, tightness_example_with_beta, FaistDilations, TightnessExample};
pub use pairwise::{
    adjacent_level_channel, coherent_measurement_channel, coherent_measurement_channel_with_gap, faist_channel,
    general_pairwise_channel, general_pairwise_channel_at, ordered_weight_inputs, state_transition_channel,
    OrderedWeightInputs, StateTransition,
};

/// Two orthogonal input states, optionally with a channel that recovers both.
#[derive(Clone, Debug)]
pub struct ReversiblePair<R: Real> {
    rho1: DensityOperator<R>,
    rho2: DensityOperator<R>,
    recovery: Option<QuantumChannel<R>>,
}

impl<R: Real> ReversiblePair<R> {
    /// Requires `Tr(ρ₁ρ₂) ≤ 1e-10` (scaled for the precision of `R`).
    pub fn new(rho1: DensityOperator<R>, rho2: DensityOperator<R>, recovery: Option<QuantumChannel<R>>) -> Result<Self> {
        if rho1.dim() != rho2.dim() {
            return Err(Error::DimensionMismatch("pair states on different systems".into()));
        }
        let overlap = rho1.overlap(&rho2);
        if overlap.abs() > R::structural_tol() {
            return Err(Error::NotOrthogonal { overlap: overlap.as_f64() });
        }
        if let Some(r) = &recovery {
            if r.output().dim() != rho1.dim() {
                return Err(Error::DimensionMismatch("recovery does not map back to the pair's system".into()));
            }
        }
        Ok(Self { rho1, rho2, recovery })
    }

    pub fn rho1(&self) -> &DensityOperator<R> {
        &self.rho1
    }

    pub fn rho2(&self) -> &DensityOperator<R> {
        &self.rho2
    }

    pub fn states(&self) -> [&DensityOperator<R>; 2] {
        [&self.rho1, &self.rho2]
    }

    pub fn recovery(&self) -> Option<&QuantumChannel<R>> {
        self.recovery.as_ref()
    }

    /// `D_F(R∘Λ(ρ_j), ρ_j)` for both members.
    pub fn recovery_errors(&self, channel: &QuantumChannel<R>) -> Result<[R; 2]> {
        let r = self.recovery.as_ref().ok_or(Error::MissingRecovery)?;
        let err = |rho: &DensityOperator<R>| -> Result<R> {
            let back = r.apply(&channel.apply(rho)?)?;
            purified_distance(rho, &back)
        };
        Ok([err(&self.rho1)?, err(&self.rho2)?])
    }
}

/// A constructed channel with its pair and named scalars such as `r` and `C`.
#[derive(Clone, Debug)]
pub struct ConstructionResult<R: Real> {
    pub channel: QuantumChannel<R>,
    pub pair: Option<ReversiblePair<R>>,
    pub metadata: BTreeMap<String, R>,
}

/// Residuals of the checks every construction is expected to pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Obligations<R: Real> {
    pub tp_residual: R,
    pub cp_residual: R,
    pub gibbs_residual: R,
    pub recovery_errors: Option<[R; 2]>,
}

impl<R: Real> Obligations<R> {
    /// CPTP and Gibbs residuals within `tol`, recovery errors within `recovery_tol`.
    pub fn hold(&self, tol: R, recovery_tol: R) -> bool {
        self.tp_residual <= tol
            && self.cp_residual <= tol
            && self.gibbs_residual <= tol
            && self.recovery_errors.is_none_or(|e| e.iter().all(|&x| x <= recovery_tol))
    }
}

impl<R: Real> ConstructionResult<R> {
    pub(crate) fn new(channel: QuantumChannel<R>, pair: Option<ReversiblePair<R>>) -> Self {
        Self { channel, pair, metadata: BTreeMap::new() }
    }

    pub(crate) fn with(mut self, key: &str, value: R) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    pub fn meta(&self, key: &str) -> Option<R> {
        self.metadata.get(key).copied()
    }

    pub fn obligations(&self) -> Result<Obligations<R>> {
        let cert = self.channel.validate();
        let gibbs = self.channel.is_gibbs_preserving(R::zero());
        let recovery_errors = match &self.pair {
            Some(p) if p.recovery().is_some() => Some(p.recovery_errors(&self.channel)?),
            _ => None,
        };
        Ok(Obligations {
            tp_residual: cert.tp_residual,
            cp_residual: cert.cp_residual,
            gibbs_residual: gibbs.residual,
            recovery_errors,
        })
    }
}
