//! Gibbs-preserving quantum channels: construction, certification and
//! coherence-cost bounds, generic over `f32` and `f64`.

pub mod error;
pub mod linalg;
pub mod sampling;
pub mod scalar;

pub mod certify;
pub mod channels;
pub mod constructions;
pub mod quantum;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Double-precision aliases for the common types.
pub mod f64 {
    pub type Matrix = crate::linalg::ComplexMatrix<f64>;
    pub type System = crate::quantum::SystemSpec<f64>;
    pub type Density = crate::quantum::DensityOperator<f64>;
    pub type Pure = crate::quantum::PureState<f64>;
    pub type Channel = crate::channels::QuantumChannel<f64>;
    pub type Dilation = crate::channels::Dilation<f64>;
    pub type Pair = crate::constructions::ReversiblePair<f64>;
}
