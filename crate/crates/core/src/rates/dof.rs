use serde::Serialize;

use super::rate::rates_from_combiners;
use super::zf::zf_receive;
use super::db_to_linear;
use crate::channel::ComplexChannelMatrix;
use crate::error::{Error, Result};
use crate::schemes::{BeamformerSet, SchemeKind};

pub const DEFAULT_GRID_DB: [f64; 6] = [60.0, 70.0, 80.0, 90.0, 100.0, 110.0];
pub const GRID_MIN_DB: f64 = 40.0;
pub const GRID_MAX_DB: f64 = 140.0;

/// Least-squares fit of sum rate against `log2(snr)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DofEstimate {
    pub snr_db: Vec<f64>,
    pub sum_rates: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square regression residual, bits per channel use.
    pub residual: f64,
}

pub fn validate_grid(grid_db: &[f64]) -> Result<()> {
    if grid_db.len() < 4 {
        return Err(Error::InvalidInput(format!("snr grid needs at least 4 points, got {}", grid_db.len())));
    }
    if let Some(x) = grid_db.iter().find(|x| !(GRID_MIN_DB..=GRID_MAX_DB).contains(*x)) {
        return Err(Error::InvalidInput(format!("snr grid point {x} dB outside [{GRID_MIN_DB}, {GRID_MAX_DB}]")));
    }
    if grid_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("snr grid must be strictly increasing".into()));
    }
    Ok(())
}

pub fn fit_dof(grid_db: &[f64], sum_rates: &[f64]) -> Result<DofEstimate> {
    validate_grid(grid_db)?;
    if sum_rates.len() != grid_db.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rates", grid_db.len()),
            found: format!("{} rates", sum_rates.len()),
        });
    }
    let x: Vec<f64> = grid_db.iter().map(|db| db / 10.0 * 10f64.log2()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = sum_rates.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(sum_rates).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(sum_rates).map(|(xi, yi)| (yi - intercept - slope * xi).powi(2)).sum();
    if !slope.is_finite() {
        return Err(Error::Degenerate("non-finite regression slope".into()));
    }
    Ok(DofEstimate {
        snr_db: grid_db.to_vec(),
        sum_rates: sum_rates.to_vec(),
        slope,
        intercept,
        residual: (sse / n).sqrt(),
    })
}

/// Sum rates of an already built set over `grid_db`, combiners solved once.
pub fn sum_rate_curve(set: &BeamformerSet, channel: &ComplexChannelMatrix, grid_db: &[f64]) -> Result<Vec<f64>> {
    let combiners = zf_receive(set, channel)?;
    grid_db
        .iter()
        .map(|&db| rates_from_combiners(set, channel, &combiners, db_to_linear(db)).map(|r| r.sum_rate))
        .collect()
}

/// Builds `kind` on `channel` with `seed` and fits the sum-rate slope over `grid_db`.
pub fn estimate_dof(kind: SchemeKind, channel: &ComplexChannelMatrix, seed: u64, grid_db: &[f64]) -> Result<DofEstimate> {
    validate_grid(grid_db)?;
    let set = kind.build(channel, seed)?;
    fit_dof(grid_db, &sum_rate_curve(&set, channel, grid_db)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{construct_special_channel, sample_channel, SpecialChannel};

    #[test]
    fn exact_line_is_recovered() {
        let grid = [40.0, 50.0, 60.0, 70.0];
        let rates: Vec<f64> = grid.iter().map(|db| 3.0 + 1.25 * db / 10.0 * 10f64.log2()).collect();
        let fit = fit_dof(&grid, &rates).unwrap();
        assert!((fit.slope - 1.25).abs() < 1e-12);
        assert!((fit.intercept - 3.0).abs() < 1e-9);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&DEFAULT_GRID_DB).is_ok());
        assert!(validate_grid(&[60.0, 70.0, 80.0]).is_err());
        assert!(validate_grid(&[30.0, 70.0, 80.0, 90.0]).is_err());
        assert!(validate_grid(&[60.0, 70.0, 150.0, 160.0]).is_err());
        assert!(validate_grid(&[60.0, 70.0, 70.0, 90.0]).is_err());
        assert!(fit_dof(&DEFAULT_GRID_DB, &[1.0; 5]).is_err());
    }

    #[test]
    fn scheme_slopes() {
        let acs = estimate_dof(SchemeKind::AcsIc3, &sample_channel(9, 3, 3).unwrap(), 9, &DEFAULT_GRID_DB).unwrap();
        assert!((1.17..=1.23).contains(&acs.slope), "{}", acs.slope);
        let x = estimate_dof(SchemeKind::XChannel, &sample_channel(9, 2, 2).unwrap(), 9, &DEFAULT_GRID_DB).unwrap();
        assert!((x.slope - 4.0 / 3.0).abs() <= 0.03, "{}", x.slope);
        let pe = construct_special_channel(SpecialChannel::PhaseExample).unwrap();
        let pa = estimate_dof(SchemeKind::PhaseAlignment, &pe, 0, &DEFAULT_GRID_DB).unwrap();
        assert!((1.47..=1.53).contains(&pa.slope), "{}", pa.slope);
    }

    #[test]
    fn deterministic() {
        let ch = sample_channel(10, 3, 3).unwrap();
        assert_eq!(
            estimate_dof(SchemeKind::AcsIc3, &ch, 1, &DEFAULT_GRID_DB).unwrap(),
            estimate_dof(SchemeKind::AcsIc3, &ch, 1, &DEFAULT_GRID_DB).unwrap()
        );
    }
}
