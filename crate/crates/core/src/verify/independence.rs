use serde::Serialize;

use crate::channel::ComplexChannelMatrix;
use crate::error::Result;
use crate::linalg::{min_principal_angle, singular_values, stack_columns};
use crate::schemes::BeamformerSet;

/// Smallest singular value above which unit-norm columns count as independent.
pub const INDEPENDENT_THRESHOLD: f64 = 1e-6;
/// Smallest singular value below which unit-norm columns count as dependent.
pub const DEPENDENT_THRESHOLD: f64 = 1e-10;

/// Largest violation `‖Ū(φ_r,a)v_d − scale·Ū(φ_r,b)v_s‖` over the set's alignment equations.
pub fn alignment_residual(set: &BeamformerSet, channel: &ComplexChannelMatrix) -> Result<f64> {
    set.require_channel(channel)?;
    let mut worst: f64 = 0.0;
    for a in set.alignments() {
        let lhs = set.effective_column(channel, a.receiver, a.derived)?;
        let rhs = set.effective_column(channel, a.receiver, a.source)? * a.scale;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankStatus {
    Independent,
    Dependent,
    /// Smallest singular value falls in the gap between the two thresholds.
    Indeterminate,
}

impl RankStatus {
    pub fn classify(sigma_min: f64) -> Self {
        if sigma_min > INDEPENDENT_THRESHOLD {
            RankStatus::Independent
        } else if sigma_min < DEPENDENT_THRESHOLD {
            RankStatus::Dependent
        } else {
            RankStatus::Indeterminate
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceiverIndependence {
    /// Zero-based receiver.
    pub receiver: usize,
    pub rows: usize,
    pub desired_columns: usize,
    pub interference_columns: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Smallest principal angle between desired and interference spans, radians.
    /// `π/2` when either side is empty.
    pub min_principal_angle: f64,
    pub status: RankStatus,
}

impl ReceiverIndependence {
    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// Numerical rank using the dependence threshold.
    pub fn rank(&self) -> usize {
        self.singular_values.iter().filter(|&&s| s >= DEPENDENT_THRESHOLD).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub scheme: String,
    pub receivers: Vec<ReceiverIndependence>,
}

impl IndependenceReport {
    pub fn passes(&self) -> bool {
        self.receivers.iter().all(|r| r.status == RankStatus::Independent)
    }
}

/// Stacks, per receiver, the desired receive images and the deduplicated interference
/// basis (one column per alignment class), and reports their singular values.
pub fn independence_margin(set: &BeamformerSet, channel: &ComplexChannelMatrix) -> Result<IndependenceReport> {
    set.require_channel(channel)?;
    let dim = set.dim();
    let mut receivers = Vec::with_capacity(set.num_rx());
    for rx in 0..set.num_rx() {
        let desired = columns(set, channel, rx, &set.desired_streams(rx))?;
        let interference = columns(set, channel, rx, &set.interference_basis(rx))?;
        let all: Vec<_> = desired.iter().chain(&interference).cloned().collect();
        let sv = singular_values(&stack_columns(dim, &all));
        let angle = if desired.is_empty() || interference.is_empty() {
            std::f64::consts::FRAC_PI_2
        } else {
            min_principal_angle(&stack_columns(dim, &desired), &stack_columns(dim, &interference), DEPENDENT_THRESHOLD)
        };
        let sigma_min = if all.len() > dim { 0.0 } else { sv.last().copied().unwrap_or(0.0) };
        receivers.push(ReceiverIndependence {
            receiver: rx,
            rows: dim,
            desired_columns: desired.len(),
            interference_columns: interference.len(),
            status: RankStatus::classify(sigma_min),
            singular_values: sv,
            min_principal_angle: angle,
        });
    }
    Ok(IndependenceReport { scheme: set.kind().to_string(), receivers })
}

fn columns(
    set: &BeamformerSet,
    channel: &ComplexChannelMatrix,
    rx: usize,
    ids: &[usize],
) -> Result<Vec<nalgebra::DVector<f64>>> {
    ids.iter().map(|&s| set.effective_column(channel, rx, s)).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{construct_special_channel, sample_channel, SpecialChannel};
    use crate::schemes::{build_acs_ic3, build_acs_ic3_unchecked, build_phase_alignment, build_x_channel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_sets_have_tiny_residuals() {
        let ch = sample_channel(7, 3, 3).unwrap();
        let set = build_acs_ic3(&ch, 7).unwrap();
        assert!(alignment_residual(&set, &ch).unwrap() <= 1e-12);
        let ch2 = sample_channel(7, 2, 2).unwrap();
        let x = build_x_channel(&ch2, 7).unwrap();
        assert!(alignment_residual(&x, &ch2).unwrap() <= 1e-12);
        let pe = construct_special_channel(SpecialChannel::PhaseExample).unwrap();
        assert!(alignment_residual(&build_phase_alignment(&pe).unwrap(), &pe).unwrap() <= 1e-12);
    }

    #[test]
    fn perturbed_derived_column_shows_up() {
        let ch = sample_channel(7, 3, 3).unwrap();
        let mut set = build_acs_ic3(&ch, 7).unwrap();
        let derived = set.alignments()[0].derived;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let col = set.column_mut(derived);
        for x in col.iter_mut() {
            *x += 1e-3 * (rng.random::<f64>() - 0.5) * 2.0;
        }
        let r = alignment_residual(&set, &ch).unwrap();
        assert!((1e-4..=1e-2).contains(&r), "{r}");
    }

    #[test]
    fn mismatched_shape_is_an_error() {
        let ch = sample_channel(7, 3, 3).unwrap();
        let set = build_acs_ic3(&ch, 7).unwrap();
        let other = sample_channel(7, 2, 2).unwrap();
        assert!(alignment_residual(&set, &other).is_err());
        assert!(independence_margin(&set, &other).is_err());
    }

    #[test]
    fn acs_full_rank_on_generic_channel() {
        let ch = sample_channel(12, 3, 3).unwrap();
        let report = independence_margin(&build_acs_ic3(&ch, 3).unwrap(), &ch).unwrap();
        assert!(report.passes());
        for r in &report.receivers {
            assert_eq!((r.rows, r.desired_columns, r.interference_columns), (10, 4, 6));
            assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
            assert!(r.min_principal_angle > 0.0);
        }
    }

    #[test]
    fn violating_channel_loses_rank_at_its_receiver() {
        for i in 1..=6u8 {
            let ch = construct_special_channel(SpecialChannel::AcsViolating(i)).unwrap();
            let report = independence_margin(&build_acs_ic3_unchecked(&ch, 3).unwrap(), &ch).unwrap();
            let bad = crate::verify::conditions::acs_expression_receiver(i as usize);
            for r in &report.receivers {
                if r.receiver == bad {
                    assert!(r.sigma_min() < DEPENDENT_THRESHOLD, "i={i}: {}", r.sigma_min());
                    assert_eq!(r.status, RankStatus::Dependent);
                } else {
                    assert_eq!(r.status, RankStatus::Independent, "i={i} rx={}", r.receiver);
                }
            }
        }
    }

    #[test]
    fn classify_thresholds() {
        assert_eq!(RankStatus::classify(1e-3), RankStatus::Independent);
        assert_eq!(RankStatus::classify(1e-12), RankStatus::Dependent);
        assert_eq!(RankStatus::classify(1e-8), RankStatus::Indeterminate);
    }
}
