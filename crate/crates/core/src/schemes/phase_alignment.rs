use nalgebra::DVector;

use super::{alignment_rotation, require_feasible, BeamformerSet, MessageId, SchemeKind, SetBuilder};
use crate::channel::ComplexChannelMatrix;
use crate::error::Result;
use crate::verify::conditions::PHASE_CYCLE;

/// Single-extension phase alignment on the 3-user channel: one real stream per user with
/// all interference at every receiver collapsed onto one real line.
///
/// Requires the cycle phase sum to be a multiple of π. The rotation by that sum is then
/// `±I`, so any real vector is an eigenvector; `V_1 = (1, 0)` is used.
pub fn build_phase_alignment(channel: &ComplexChannelMatrix) -> Result<BeamformerSet> {
    channel.require_shape(3, 3)?;
    let kind = SchemeKind::PhaseAlignment;
    require_feasible(kind, channel)?;

    let v1 = DVector::from_vec(vec![1.0, 0.0]);
    // receiver 2 aligns V3 with V1, receiver 1 aligns V2 with V3
    let v3 = alignment_rotation(channel, 1, 2, 0, 1)?.apply(&v1);
    let v2 = alignment_rotation(channel, 0, 1, 2, 1)?.apply(&v3);
    // at receiver 3 the images of V2 and V1 differ by the cycle rotation, i.e. ±1
    let cycle_sign = PHASE_CYCLE.evaluate(channel).cos().signum();

    let mut b = SetBuilder::new(kind);
    let s1 = b.stream(MessageId { rx: 0, tx: 0 }, "V1".into(), v1);
    let s2 = b.stream(MessageId { rx: 1, tx: 1 }, "V2".into(), v2);
    let s3 = b.stream(MessageId { rx: 2, tx: 2 }, "V3".into(), v3);
    b.align(0, s2, s3, 1.0);
    b.align(1, s3, s1, 1.0);
    b.align(2, s2, s1, cycle_sign);
    Ok(b.finish())
}
