//! Quantum channels: Kraus/Choi forms, duals, composition, dilations and
//! the Gibbs-preservation and covariance predicates.

mod channel;
mod covariance;
mod dilation;

pub use channel::{compose, ChannelCertificate, GibbsVerdict, MeasureBranch, QuantumChannel};
pub use covariance::{covariance_times, is_covariant, CovarianceVerdict};
pub use dilation::{channel_from_dilation, energy_conservation_defect, Dilation};
