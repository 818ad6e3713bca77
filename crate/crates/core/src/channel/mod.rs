//! Constant complex channels between transmitters and single-antenna receivers.

mod rotation;
mod special;
pub mod text;

pub use rotation::{extend_rotation, rotation_matrix, ExtendedRotation, RealLiftedVector};
pub use special::{construct_special_channel, SpecialChannel};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::angle::wrap_two_pi;
use crate::error::{Error, Result};

/// One link coefficient `h·e^{jφ}` with `h ≥ 0` and `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelEntry {
    pub magnitude: f64,
    pub phase: f64,
}

impl ChannelEntry {
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        if !magnitude.is_finite() || magnitude < 0.0 {
            return Err(Error::InvalidInput(format!(
                "channel magnitude must be finite and nonnegative, got {magnitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidInput(format!("channel phase must be finite, got {phase}")));
        }
        Ok(Self { magnitude, phase: wrap_two_pi(phase) })
    }

    pub fn coefficient(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Grid of complex coefficients, row `r` = receiver, column `t` = transmitter.
/// Indices are zero-based throughout the API.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexChannelMatrix {
    num_rx: usize,
    num_tx: usize,
    entries: Vec<ChannelEntry>,
}

impl ComplexChannelMatrix {
    /// Builds a channel from `(magnitude, phase)` pairs in receiver-major order.
    pub fn from_polar(num_rx: usize, num_tx: usize, polar: &[(f64, f64)]) -> Result<Self> {
        check_shape(num_rx, num_tx)?;
        if polar.len() != num_rx * num_tx {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", num_rx * num_tx),
                found: format!("{} entries", polar.len()),
            });
        }
        let entries = polar
            .iter()
            .map(|&(m, p)| ChannelEntry::new(m, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { num_rx, num_tx, entries })
    }

    /// Builds a channel from complex coefficients in receiver-major order.
    pub fn from_complex(num_rx: usize, num_tx: usize, coefficients: &[Complex64]) -> Result<Self> {
        let polar: Vec<(f64, f64)> = coefficients.iter().map(|z| (z.norm(), z.arg())).collect();
        Self::from_polar(num_rx, num_tx, &polar)
    }

    pub fn num_rx(&self) -> usize {
        self.num_rx
    }

    pub fn num_tx(&self) -> usize {
        self.num_tx
    }

    pub fn entry(&self, rx: usize, tx: usize) -> ChannelEntry {
        assert!(rx < self.num_rx && tx < self.num_tx, "channel index ({rx}, {tx}) out of range");
        self.entries[rx * self.num_tx + tx]
    }

    pub fn magnitude(&self, rx: usize, tx: usize) -> f64 {
        self.entry(rx, tx).magnitude
    }

    pub fn phase(&self, rx: usize, tx: usize) -> f64 {
        self.entry(rx, tx).phase
    }

    pub fn coefficient(&self, rx: usize, tx: usize) -> Complex64 {
        self.entry(rx, tx).coefficient()
    }

    /// The link's phase as a rotation over an S-symbol extension.
    pub fn rotation(&self, rx: usize, tx: usize, extension: usize) -> Result<ExtendedRotation> {
        ExtendedRotation::new(self.phase(rx, tx), extension)
    }

    /// True iff every link has strictly positive magnitude.
    pub fn is_fully_connected(&self) -> bool {
        self.entries.iter().all(|e| e.magnitude > 0.0)
    }

    /// Returns a copy with one entry replaced.
    pub fn with_entry(&self, rx: usize, tx: usize, magnitude: f64, phase: f64) -> Result<Self> {
        if rx >= self.num_rx || tx >= self.num_tx {
            return Err(Error::InvalidInput(format!("channel index ({rx}, {tx}) out of range")));
        }
        let mut out = self.clone();
        out.entries[rx * self.num_tx + tx] = ChannelEntry::new(magnitude, phase)?;
        Ok(out)
    }

    pub fn require_shape(&self, num_rx: usize, num_tx: usize) -> Result<()> {
        if self.num_rx != num_rx || self.num_tx != num_tx {
            return Err(Error::DimensionMismatch {
                expected: format!("{num_rx}x{num_tx} channel"),
                found: format!("{}x{} channel", self.num_rx, self.num_tx),
            });
        }
        Ok(())
    }
}

fn check_shape(num_rx: usize, num_tx: usize) -> Result<()> {
    if num_rx == 0 || num_tx == 0 {
        return Err(Error::InvalidInput(format!(
            "channel needs at least one receiver and transmitter, got {num_rx}x{num_tx}"
        )));
    }
    Ok(())
}

/// Draws a channel whose coefficients are i.i.d. standard circularly symmetric complex
/// Gaussians: Rayleigh magnitudes and uniform phases. Deterministic in `seed`.
pub fn sample_channel(seed: u64, num_rx: usize, num_tx: usize) -> Result<ComplexChannelMatrix> {
    check_shape(num_rx, num_tx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let coefficients: Vec<Complex64> = (0..num_rx * num_tx)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(scale * re, scale * im)
        })
        .collect();
    ComplexChannelMatrix::from_complex(num_rx, num_tx, &coefficients)
}
