//! Condition checks, residual and rank diagnostics, and the two lemma routines that
//! underpin the upper bound.

pub mod conditions;
mod independence;
mod lemmas;

pub use conditions::{check_conditions, ConditionRecord, ConditionReport, ConditionSet, Requirement};
pub use independence::{
    alignment_residual, independence_margin, IndependenceReport, RankStatus, ReceiverIndependence,
    DEPENDENT_THRESHOLD, INDEPENDENT_THRESHOLD,
};
pub use lemmas::{demonstrate_lemma2, solve_lemma1, Lemma2Demo, LEMMA_TOLERANCE};
