//! Phase (and magnitude) conditions that decide whether a scheme's construction is
//! feasible on a given channel, or whether the channel is one of the known singular cases.

use std::fmt;

use serde::Serialize;

use crate::angle::{distance_mod_pi, distance_mod_two_pi, wrap_signed};
use crate::channel::ComplexChannelMatrix;
use crate::error::Result;

/// An expression "is zero mod π" iff it lies within this many radians of a multiple of π.
pub const PHASE_TOLERANCE: f64 = 1e-9;
/// A magnitude ratio "equals one" iff `|ratio − 1|` is within this bound.
pub const RATIO_TOLERANCE: f64 = 1e-9;

/// Signed link phase; indices are one-based to mirror the usual `φ_rt` notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub sign: i8,
    pub rx: usize,
    pub tx: usize,
}

const fn p(rx: usize, tx: usize) -> Term {
    Term { sign: 1, rx, tx }
}

const fn m(rx: usize, tx: usize) -> Term {
    Term { sign: -1, rx, tx }
}

/// A signed sum of link phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseExpression {
    pub terms: &'static [Term],
}

impl PhaseExpression {
    pub fn evaluate(&self, channel: &ComplexChannelMatrix) -> f64 {
        self.terms
            .iter()
            .map(|t| f64::from(t.sign) * channel.phase(t.rx - 1, t.tx - 1))
            .sum()
    }

    /// Product of magnitudes of positive terms over product of magnitudes of negative terms.
    pub fn magnitude_ratio(&self, channel: &ComplexChannelMatrix) -> f64 {
        let (mut num, mut den) = (1.0, 1.0);
        for t in self.terms {
            let h = channel.magnitude(t.rx - 1, t.tx - 1);
            if t.sign > 0 {
                num *= h;
            } else {
                den *= h;
            }
        }
        num / den
    }
}

impl fmt::Display for PhaseExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.sign > 0) {
                (0, true) => write!(f, "phi{}{}", t.rx, t.tx)?,
                (0, false) => write!(f, "-phi{}{}", t.rx, t.tx)?,
                (_, true) => write!(f, " + phi{}{}", t.rx, t.tx)?,
                (_, false) => write!(f, " - phi{}{}", t.rx, t.tx)?,
            }
        }
        Ok(())
    }
}

/// The six cross-cycle expressions that must avoid multiples of π for the five-symbol
/// asymmetric scheme on the 3-user interference channel. Expressions `2r−1` and `2r`
/// govern separability at receiver `r`.
pub const ACS_EXPRESSIONS: [PhaseExpression; 6] = [
    PhaseExpression { terms: &[p(1, 3), p(2, 1), m(2, 3), m(1, 1)] },
    PhaseExpression { terms: &[p(1, 2), p(3, 1), m(3, 2), m(1, 1)] },
    PhaseExpression { terms: &[p(2, 1), p(3, 2), m(3, 1), m(2, 2)] },
    PhaseExpression { terms: &[p(2, 3), p(1, 2), m(1, 3), m(2, 2)] },
    PhaseExpression { terms: &[p(3, 2), p(1, 3), m(1, 2), m(3, 3)] },
    PhaseExpression { terms: &[p(3, 1), p(2, 3), m(2, 1), m(3, 3)] },
];

/// Zero-based receiver whose desired/interference separation is governed by the
/// one-based ACS expression `index`.
pub fn acs_expression_receiver(index: usize) -> usize {
    assert!((1..=6).contains(&index), "ACS expressions are numbered 1..=6");
    (index - 1) / 2
}

/// Cycle phase sum for the single-extension phase-alignment scheme; must be 0 mod π.
pub const PHASE_CYCLE: PhaseExpression =
    PhaseExpression { terms: &[p(3, 2), p(2, 1), p(1, 3), m(1, 2), m(2, 3), m(3, 1)] };

const PHASE_SEPARATION: [PhaseExpression; 3] = [
    PhaseExpression { terms: &[p(2, 1), m(2, 3), p(1, 3), m(1, 1)] },
    PhaseExpression { terms: &[p(2, 2), p(1, 3), m(1, 2), m(2, 3)] },
    PhaseExpression { terms: &[p(3, 3), p(2, 1), m(2, 3), m(3, 1)] },
];

/// Two-user X channel (and cognitive X channel) phase condition.
pub const X_CHANNEL_EXPRESSION: PhaseExpression =
    PhaseExpression { terms: &[p(1, 1), p(2, 2), m(2, 1), m(1, 2)] };

const UPLINK_EXPRESSIONS: [PhaseExpression; 2] = [
    PhaseExpression { terms: &[p(1, 1), p(2, 2), m(2, 1), m(1, 2)] },
    PhaseExpression { terms: &[p(2, 3), p(1, 4), m(1, 3), m(2, 4)] },
];

/// Which family of conditions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionSet {
    /// Single-extension phase alignment on the 3-user channel (3/2 DoF).
    PhaseAlignment,
    /// Five-symbol asymmetric scheme on the 3-user channel (1.2 DoF).
    AcsIc3,
    /// Known singular 3-user channels limited to one degree of freedom.
    Singularity,
    /// Two-user X channel.
    XChannel,
    /// Two interfering two-user uplinks.
    Uplinks,
}

impl ConditionSet {
    pub fn name(&self) -> &'static str {
        match self {
            ConditionSet::PhaseAlignment => "phase-alignment",
            ConditionSet::AcsIc3 => "acs-ic3",
            ConditionSet::Singularity => "singularity",
            ConditionSet::XChannel => "x-channel",
            ConditionSet::Uplinks => "uplinks",
        }
    }

    fn shape(&self) -> (usize, usize) {
        match self {
            ConditionSet::PhaseAlignment | ConditionSet::AcsIc3 | ConditionSet::Singularity => (3, 3),
            ConditionSet::XChannel => (2, 2),
            ConditionSet::Uplinks => (2, 4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    /// Expression must stay away from every multiple of π.
    NonzeroModPi,
    /// Expression must be a multiple of π.
    ZeroModPi,
    /// Magnitude ratio equals one and expression is a multiple of 2π.
    UnitRatioZeroModTwoPi,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRecord {
    pub id: String,
    pub expression: String,
    pub requirement: Requirement,
    /// Expression value wrapped into (−π, π].
    pub phase_sum: f64,
    pub magnitude_ratio: Option<f64>,
    /// Distance to the nearest multiple of π (or 2π for singularity records).
    pub distance: f64,
    /// Whether the stated requirement is met.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub set: ConditionSet,
    pub tolerance: f64,
    pub records: Vec<ConditionRecord>,
}

impl ConditionReport {
    /// Feasibility sets pass when every requirement holds; the singularity set passes when
    /// no singular condition holds.
    pub fn passes(&self) -> bool {
        match self.set {
            ConditionSet::Singularity => self.records.iter().all(|r| !r.holds),
            _ => self.records.iter().all(|r| r.holds),
        }
    }

    /// Ids of feasibility requirements that do not hold, or singular conditions that do.
    pub fn failed(&self) -> Vec<String> {
        let singular = self.set == ConditionSet::Singularity;
        self.records
            .iter()
            .filter(|r| r.holds == singular)
            .map(|r| r.id.clone())
            .collect()
    }

    pub fn record(&self, id: &str) -> Option<&ConditionRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}

fn phase_record(id: String, expr: &PhaseExpression, requirement: Requirement, ch: &ComplexChannelMatrix) -> ConditionRecord {
    let value = expr.evaluate(ch);
    let distance = distance_mod_pi(value);
    let holds = match requirement {
        Requirement::NonzeroModPi => distance > PHASE_TOLERANCE,
        Requirement::ZeroModPi => distance <= PHASE_TOLERANCE,
        Requirement::UnitRatioZeroModTwoPi => unreachable!("singularity records carry a ratio"),
    };
    ConditionRecord {
        id,
        expression: expr.to_string(),
        requirement,
        phase_sum: wrap_signed(value),
        magnitude_ratio: None,
        distance,
        holds,
    }
}

fn singular_record(index: usize, expr: &PhaseExpression, ch: &ComplexChannelMatrix) -> ConditionRecord {
    let value = expr.evaluate(ch);
    let distance = distance_mod_two_pi(value);
    let ratio = expr.magnitude_ratio(ch);
    let holds = (ratio - 1.0).abs() <= RATIO_TOLERANCE && distance <= PHASE_TOLERANCE;
    ConditionRecord {
        id: format!("singular-{index}"),
        expression: expr.to_string(),
        requirement: Requirement::UnitRatioZeroModTwoPi,
        phase_sum: wrap_signed(value),
        magnitude_ratio: Some(ratio),
        distance,
        holds,
    }
}

/// Evaluates every condition of `set` on `channel`.
pub fn check_conditions(channel: &ComplexChannelMatrix, set: ConditionSet) -> Result<ConditionReport> {
    let (rx, tx) = set.shape();
    channel.require_shape(rx, tx)?;
    let nonzero = Requirement::NonzeroModPi;
    let records = match set {
        ConditionSet::PhaseAlignment => {
            let mut v = vec![phase_record("cycle".into(), &PHASE_CYCLE, Requirement::ZeroModPi, channel)];
            v.extend(
                PHASE_SEPARATION
                    .iter()
                    .enumerate()
                    .map(|(i, e)| phase_record(format!("rx{}", i + 1), e, nonzero, channel)),
            );
            v
        }
        ConditionSet::AcsIc3 => ACS_EXPRESSIONS
            .iter()
            .enumerate()
            .map(|(i, e)| phase_record(format!("acs-{}", i + 1), e, nonzero, channel))
            .collect(),
        ConditionSet::Singularity => ACS_EXPRESSIONS
            .iter()
            .enumerate()
            .map(|(i, e)| singular_record(i + 1, e, channel))
            .collect(),
        ConditionSet::XChannel => vec![phase_record("x-phase".into(), &X_CHANNEL_EXPRESSION, nonzero, channel)],
        ConditionSet::Uplinks => UPLINK_EXPRESSIONS
            .iter()
            .enumerate()
            .map(|(i, e)| phase_record(format!("cell-{}", i + 1), e, nonzero, channel))
            .collect(),
    };
    Ok(ConditionReport { set, tolerance: PHASE_TOLERANCE, records })
}
