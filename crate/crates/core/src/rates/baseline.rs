use serde::Serialize;

use super::db_to_linear;
use super::dof::{fit_dof, validate_grid, DofEstimate};
use crate::channel::ComplexChannelMatrix;
use crate::error::{Error, Result};

/// Per-symbol rates with circularly symmetric Gaussian inputs and interference treated as
/// noise: `R_k = log2(1 + |H_kk|²p_k / (1 + Σ_{l≠k} |H_kl|²p_l))`, bits per channel use.
pub fn baseline_circsym(channel: &ComplexChannelMatrix, powers: &[f64]) -> Result<Vec<f64>> {
    let k = channel.num_rx();
    channel.require_shape(k, k)?;
    if powers.len() != k {
        return Err(Error::DimensionMismatch { expected: format!("{k} powers"), found: format!("{} powers", powers.len()) });
    }
    if let Some(p) = powers.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidInput(format!("power must be nonnegative and finite, got {p}")));
    }
    Ok((0..k)
        .map(|r| {
            let signal = channel.magnitude(r, r).powi(2) * powers[r];
            let interference: f64 = (0..k)
                .filter(|&l| l != r)
                .map(|l| channel.magnitude(r, l).powi(2) * powers[l])
                .sum();
            (1.0 + signal / (1.0 + interference)).log2()
        })
        .collect())
}

/// Ways of running the per-symbol baseline at a given SNR budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselinePolicy {
    /// Every user transmits at full power.
    AllActive,
    /// Only the given zero-based user transmits.
    Single(usize),
    /// Users take equal turns, each alone at full power.
    TimeShare,
}

pub fn baseline_sum_rate(channel: &ComplexChannelMatrix, snr: f64, policy: BaselinePolicy) -> Result<f64> {
    let k = channel.num_rx();
    let single = |u: usize| -> Result<f64> {
        let mut p = vec![0.0; k];
        p[u] = snr;
        Ok(baseline_circsym(channel, &p)?[u])
    };
    match policy {
        BaselinePolicy::AllActive => Ok(baseline_circsym(channel, &vec![snr; k])?.iter().sum()),
        BaselinePolicy::Single(u) if u < k => single(u),
        BaselinePolicy::Single(u) => Err(Error::InvalidInput(format!("user {u} out of range"))),
        BaselinePolicy::TimeShare => Ok((0..k).map(single).sum::<Result<f64>>()? / k as f64),
    }
}

/// Best of all-active and each single-user policy, with that policy's per-user rates.
/// Time sharing never beats the best single user, so it is not searched.
pub fn best_baseline(channel: &ComplexChannelMatrix, snr: f64) -> Result<(BaselinePolicy, Vec<f64>)> {
    let k = channel.num_rx();
    let mut best = (BaselinePolicy::AllActive, baseline_circsym(channel, &vec![snr; k])?);
    for u in 0..k {
        let mut p = vec![0.0; k];
        p[u] = snr;
        let rates = baseline_circsym(channel, &p)?;
        if rates.iter().sum::<f64>() > best.1.iter().sum::<f64>() {
            best = (BaselinePolicy::Single(u), rates);
        }
    }
    Ok(best)
}

pub fn best_baseline_sum_rate(channel: &ComplexChannelMatrix, snr: f64) -> Result<f64> {
    Ok(best_baseline(channel, snr)?.1.iter().sum())
}

/// Slope of the best baseline sum rate over `grid_db`.
pub fn baseline_dof(channel: &ComplexChannelMatrix, grid_db: &[f64]) -> Result<DofEstimate> {
    validate_grid(grid_db)?;
    let rates = grid_db
        .iter()
        .map(|&db| best_baseline_sum_rate(channel, db_to_linear(db)))
        .collect::<Result<Vec<f64>>>()?;
    fit_dof(grid_db, &rates)
}
