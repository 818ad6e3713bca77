//! Zero-forcing rates, fitted degrees of freedom, and the circularly symmetric baseline.

mod baseline;
mod dof;
mod rate;
mod zf;

pub use baseline::{baseline_circsym, baseline_dof, baseline_sum_rate, best_baseline, best_baseline_sum_rate, BaselinePolicy};
pub use dof::{estimate_dof, fit_dof, sum_rate_curve, validate_grid, DofEstimate, DEFAULT_GRID_DB, GRID_MAX_DB, GRID_MIN_DB};
pub use rate::{rates_from_combiners, sum_rate, RateReport, StreamRate, UserRate, NOISE_PER_REAL_DIM};
pub use zf::{zf_receive, Combiner};

/// Decibels to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
