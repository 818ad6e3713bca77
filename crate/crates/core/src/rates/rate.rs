use nalgebra::DVector;
use serde::Serialize;

use super::zf::{zf_receive, Combiner};
use crate::channel::ComplexChannelMatrix;
use crate::error::{Error, Result};
use crate::schemes::BeamformerSet;

/// Unit-variance circularly symmetric complex noise splits evenly over the real and
/// imaginary dimensions.
pub const NOISE_PER_REAL_DIM: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamRate {
    pub receiver: usize,
    pub stream: usize,
    pub message: String,
    /// Position within the message, zero-based.
    pub index: usize,
    pub zf_gain: f64,
    pub sinr: f64,
    /// Bits per S-symbol block.
    pub rate: f64,
    /// Interference power left after the combiner, same units as the desired power.
    pub residual_interference: f64,
    pub desired_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserRate {
    pub message: String,
    /// Bits per complex channel use.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub scheme: String,
    pub snr: f64,
    pub extension: usize,
    pub streams: Vec<StreamRate>,
    /// One entry per message, in order of first appearance.
    pub user_rates: Vec<UserRate>,
    /// Bits per complex channel use.
    pub sum_rate: f64,
}

/// Zero-forcing sum rate at linear `snr`.
pub fn sum_rate(set: &BeamformerSet, channel: &ComplexChannelMatrix, snr: f64) -> Result<RateReport> {
    check_snr(snr)?;
    let combiners = zf_receive(set, channel)?;
    rates_from_combiners(set, channel, &combiners, snr)
}

/// Rates for precomputed combiners, so an SNR sweep solves the projections once.
///
/// Each transmitter spends its block budget `S·snr` split by the streams' power
/// fractions. SINR assumes exact zero forcing; the leakage that floating point leaves
/// behind is reported per stream but not charged.
pub fn rates_from_combiners(
    set: &BeamformerSet,
    channel: &ComplexChannelMatrix,
    combiners: &[Combiner],
    snr: f64,
) -> Result<RateReport> {
    check_snr(snr)?;
    set.require_channel(channel)?;
    let s = set.extension() as f64;
    let power = |stream: usize| s * snr * set.streams()[stream].power_fraction;

    let mut streams = Vec::with_capacity(combiners.len());
    for c in combiners {
        let st = &set.streams()[c.stream];
        let w = DVector::from_column_slice(&c.vector);
        let h2 = channel.magnitude(c.receiver, st.tx()).powi(2);
        let desired_power = power(c.stream) * h2 * c.gain * c.gain;
        let mut residual = 0.0;
        let mut others = set.desired_streams(c.receiver);
        others.extend(set.interfering_streams(c.receiver));
        for o in others.into_iter().filter(|&o| o != c.stream) {
            let u = set.effective_column(channel, c.receiver, o)?;
            let leak = w.dot(&u);
            residual += power(o) * channel.magnitude(c.receiver, set.streams()[o].tx()).powi(2) * leak * leak;
        }
        let sinr = desired_power / NOISE_PER_REAL_DIM;
        streams.push(StreamRate {
            receiver: c.receiver,
            stream: c.stream,
            message: st.message.to_string(),
            index: st.index,
            zf_gain: c.gain,
            sinr,
            rate: 0.5 * (1.0 + sinr).log2(),
            residual_interference: residual,
            desired_power,
        });
    }
    streams.sort_by_key(|r| r.stream);

    let user_rates: Vec<UserRate> = set
        .messages()
        .into_iter()
        .map(|m| UserRate {
            message: m.to_string(),
            rate: streams
                .iter()
                .filter(|r| set.streams()[r.stream].message == m)
                .map(|r| r.rate)
                .sum::<f64>()
                / s,
        })
        .collect();
    let sum_rate = streams.iter().map(|r| r.rate).sum::<f64>() / s;
    Ok(RateReport { scheme: set.kind().to_string(), snr, extension: set.extension(), streams, user_rates, sum_rate })
}

fn check_snr(snr: f64) -> Result<()> {
    if snr.is_finite() && snr > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("snr must be positive and finite, got {snr}")))
    }
}
