use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use super::{sample_channel, ComplexChannelMatrix};
use crate::error::{Error, Result};
use crate::verify::conditions::ACS_EXPRESSIONS;

/// Seed of the generic 3×3 channel that the singular and ACS-violating families perturb.
const GENERIC_BASE_SEED: u64 = 0x5EED_0003;

/// Named non-generic 3-user channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialChannel {
    /// Direct links 1, cross links j.
    PhaseExample,
    /// Direct links 1, cross links −1.
    PlusMinusOne,
    /// Every link equal to 1.
    AllOnes,
    /// Generic channel adjusted so that exactly singular condition `i` (1..=6) holds:
    /// unit magnitude ratio and zero phase sum mod 2π.
    Singular(u8),
    /// Generic channel adjusted so that exactly ACS expression `i` (1..=6) equals π.
    AcsViolating(u8),
}

impl SpecialChannel {
    pub fn all() -> Vec<SpecialChannel> {
        let mut v = vec![SpecialChannel::PhaseExample, SpecialChannel::PlusMinusOne, SpecialChannel::AllOnes];
        v.extend((1..=6).map(SpecialChannel::Singular));
        v.extend((1..=6).map(SpecialChannel::AcsViolating));
        v
    }
}

impl fmt::Display for SpecialChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialChannel::PhaseExample => write!(f, "phase-example"),
            SpecialChannel::PlusMinusOne => write!(f, "plus-minus-one"),
            SpecialChannel::AllOnes => write!(f, "all-ones"),
            SpecialChannel::Singular(i) => write!(f, "singular-{i}"),
            SpecialChannel::AcsViolating(i) => write!(f, "acs-violating-{i}"),
        }
    }
}

impl FromStr for SpecialChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indexed = |prefix: &str| -> Option<u8> {
            s.strip_prefix(prefix)
                .and_then(|rest| rest.parse::<u8>().ok())
                .filter(|i| (1..=6).contains(i))
        };
        match s {
            "phase-example" => Ok(SpecialChannel::PhaseExample),
            "plus-minus-one" => Ok(SpecialChannel::PlusMinusOne),
            "all-ones" => Ok(SpecialChannel::AllOnes),
            _ => {
                if let Some(i) = indexed("singular-") {
                    Ok(SpecialChannel::Singular(i))
                } else if let Some(i) = indexed("acs-violating-") {
                    Ok(SpecialChannel::AcsViolating(i))
                } else {
                    Err(Error::UnknownChannelKind(s.to_string()))
                }
            }
        }
    }
}

fn direct_cross(direct: (f64, f64), cross: (f64, f64)) -> Result<ComplexChannelMatrix> {
    let polar: Vec<(f64, f64)> = (0..9).map(|k| if k / 3 == k % 3 { direct } else { cross }).collect();
    ComplexChannelMatrix::from_polar(3, 3, &polar)
}

/// Adjusts the direct link that appears negatively in ACS expression `index` so that the
/// expression evaluates to `target_phase`, optionally also forcing a unit magnitude ratio.
fn solve_direct_link(base: &ComplexChannelMatrix, index: u8, target_phase: f64, unit_ratio: bool) -> Result<ComplexChannelMatrix> {
    if !(1..=6).contains(&index) {
        return Err(Error::UnknownChannelKind(format!("condition index {index} outside 1..=6")));
    }
    let expr = &ACS_EXPRESSIONS[usize::from(index) - 1];
    let pivot = expr
        .terms
        .iter()
        .find(|t| t.sign < 0 && t.rx == t.tx)
        .expect("each expression has one negative direct link");
    let (r, t) = (pivot.rx - 1, pivot.tx - 1);
    // expression = rest − φ_pivot, ratio = num / (den_rest · h_pivot)
    let rest = expr.evaluate(base) + base.phase(r, t);
    let phase = rest - target_phase;
    let magnitude = if unit_ratio {
        expr.magnitude_ratio(base) * base.magnitude(r, t)
    } else {
        base.magnitude(r, t)
    };
    base.with_entry(r, t, magnitude, phase)
}

/// Builds one of the named special channels.
pub fn construct_special_channel(kind: SpecialChannel) -> Result<ComplexChannelMatrix> {
    match kind {
        SpecialChannel::PhaseExample => direct_cross((1.0, 0.0), (1.0, FRAC_PI_2)),
        SpecialChannel::PlusMinusOne => direct_cross((1.0, 0.0), (1.0, PI)),
        SpecialChannel::AllOnes => direct_cross((1.0, 0.0), (1.0, 0.0)),
        SpecialChannel::Singular(i) => {
            let base = sample_channel(GENERIC_BASE_SEED, 3, 3)?;
            solve_direct_link(&base, i, 0.0, true)
        }
        SpecialChannel::AcsViolating(i) => {
            let base = sample_channel(GENERIC_BASE_SEED, 3, 3)?;
            solve_direct_link(&base, i, PI, false)
        }
    }
}
