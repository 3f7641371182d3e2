//! Systems, states and the scalar quantities defined on states.

mod measures;
mod state;
mod system;

pub use measures::{d_max, d_min, fidelity, purified_distance, qfi, spectral_spread, trace_norm_distance};
pub use state::{DensityOperator, PureState};
pub use system::SystemSpec;
pub(crate) use system::check_beta;
