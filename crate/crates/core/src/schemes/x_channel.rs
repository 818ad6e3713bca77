use nalgebra::DVector;
use rand_chacha::ChaCha8Rng;

use super::random::{best_of_draws, random_orthonormal_columns};
use super::{alignment_rotation, require_feasible, BeamformerSet, Cognition, MessageId, SchemeKind, SetBuilder};
use crate::channel::ComplexChannelMatrix;
use crate::error::Result;

const EXTENSION: usize = 3;

/// Three-symbol-extension scheme on the 2-user X channel. Each of the four messages gets
/// two real streams; everything meant for receiver 1 aligns at receiver 2 and vice versa.
pub fn build_x_channel(channel: &ComplexChannelMatrix, seed: u64) -> Result<BeamformerSet> {
    channel.require_shape(2, 2)?;
    let kind = SchemeKind::XChannel;
    require_feasible(kind, channel)?;
    best_of_draws(channel, seed, |rng| draw_x(channel, rng))
}

fn draw_x(channel: &ComplexChannelMatrix, rng: &mut ChaCha8Rng) -> Result<BeamformerSet> {
    let kind = SchemeKind::XChannel;
    let free = random_orthonormal_columns(rng, 2 * EXTENSION, 4);
    let (v11, v21) = free.split_at(2);
    // U(φ22)V12 = U(φ21)V11 at receiver 2, U(φ12)V22 = U(φ11)V21 at receiver 1
    let to_v12 = alignment_rotation(channel, 1, 1, 0, EXTENSION)?;
    let to_v22 = alignment_rotation(channel, 0, 1, 0, EXTENSION)?;

    let w = |rx: usize, tx: usize| MessageId { rx, tx };
    let mut b = SetBuilder::new(kind);
    let mut src11 = Vec::new();
    let mut src21 = Vec::new();
    for (i, c) in v11.iter().enumerate() {
        src11.push(b.stream(w(0, 0), format!("V11^{}", i + 1), c.clone()));
    }
    for (i, c) in v21.iter().enumerate() {
        src21.push(b.stream(w(1, 0), format!("V21^{}", i + 1), c.clone()));
    }
    for (i, c) in v11.iter().enumerate() {
        let s = b.stream(w(0, 1), format!("V12^{}", i + 1), to_v12.apply(c));
        b.align(1, s, src11[i], 1.0);
    }
    for (i, c) in v21.iter().enumerate() {
        let s = b.stream(w(1, 1), format!("V22^{}", i + 1), to_v22.apply(c));
        b.align(0, s, src21[i], 1.0);
    }
    Ok(b.finish())
}

/// Single-symbol scheme on the X channel where receiver 2 (receiver cognition) or
/// transmitter 2 (transmitter cognition) knows `W_11`. `W_12` is not sent. `W_21` and
/// `W_22` align at receiver 1 and `W_11` arrives there orthogonal to them; receiver 2 sees
/// no interference from `W_11`. Both variants share the construction.
pub fn build_cognitive_x(channel: &ComplexChannelMatrix, cognition: Cognition) -> Result<BeamformerSet> {
    channel.require_shape(2, 2)?;
    let kind = SchemeKind::CognitiveX(cognition);
    // W_21 and W_22 must be separable at receiver 2
    require_feasible(kind, channel)?;

    let v21 = DVector::from_vec(vec![1.0, 0.0]);
    let v11 = DVector::from_vec(vec![0.0, 1.0]);
    let v22 = alignment_rotation(channel, 0, 1, 0, 1)?.apply(&v21);

    let mut b = SetBuilder::new(kind);
    b.stream(MessageId { rx: 0, tx: 0 }, "V11".into(), v11);
    let s21 = b.stream(MessageId { rx: 1, tx: 0 }, "V21".into(), v21);
    let s22 = b.stream(MessageId { rx: 1, tx: 1 }, "V22".into(), v22);
    b.align(0, s22, s21, 1.0);
    b.cancel(1, MessageId { rx: 0, tx: 0 });
    Ok(b.finish())
}
