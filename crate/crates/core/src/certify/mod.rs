//! Certification of coherence costs, recovery errors and the bound curves.

mod bounds;
mod coherence;
mod distance;
mod irreversibility;
mod stiefel;
mod tradeoff;

pub use bounds::{
    dilation_spreads, format_sig, log_points, lower_bound_curve, tightness_report,
    tightness_report_with_beta, upper_bound_curve, BoundReport, DilationSpreads, EpsilonGrid,
};
pub use coherence::{compute_c, compute_c_states, energy_change};
pub use distance::{
    channel_purified_distance, channel_purified_distance_seeded, purification, ChannelDistance, DistanceOptions,
};
pub use irreversibility::{delta_at, delta_with_recovery, optimize_recovery, DeltaEstimate, DeltaOptions};
pub use tradeoff::{tradeoff_check, TradeoffCheck};
