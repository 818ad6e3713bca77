use rand_chacha::ChaCha8Rng;

use super::random::{best_of_draws, random_orthonormal_columns};
use super::{alignment_rotation, require_feasible, BeamformerSet, MessageId, SchemeKind, SetBuilder};
use crate::channel::ComplexChannelMatrix;
use crate::error::{Error, Result};

const EXTENSION: usize = 5;
const STREAMS: usize = 4;

/// Alignments as `(receiver, (tx, stream) derived, (tx, stream) source)`, zero-based.
/// The first two streams of each transmitter are free; the last two are derived.
const ALIGNMENTS: [(usize, (usize, usize), (usize, usize)); 6] = [
    (0, (1, 2), (2, 0)),
    (0, (2, 3), (1, 1)),
    (1, (2, 2), (0, 0)),
    (1, (0, 3), (2, 1)),
    (2, (0, 2), (1, 0)),
    (2, (1, 3), (0, 1)),
];

/// Five-symbol-extension asymmetric complex signaling scheme on the 3-user interference
/// channel: four real streams per user over ten real dimensions, two alignments per
/// receiver, 12/10 degrees of freedom.
pub fn build_acs_ic3(channel: &ComplexChannelMatrix, seed: u64) -> Result<BeamformerSet> {
    channel.require_shape(3, 3)?;
    if !channel.is_fully_connected() {
        return Err(Error::Infeasible { scheme: SchemeKind::AcsIc3.to_string(), failed: vec!["fully-connected".into()] });
    }
    require_feasible(SchemeKind::AcsIc3, channel)?;
    build_acs_ic3_unchecked(channel, seed)
}

/// Same construction without the feasibility checks, for probing what happens on
/// channels where the separation conditions fail.
pub fn build_acs_ic3_unchecked(channel: &ComplexChannelMatrix, seed: u64) -> Result<BeamformerSet> {
    channel.require_shape(3, 3)?;
    best_of_draws(channel, seed, |rng| draw(channel, rng))
}

fn draw(channel: &ComplexChannelMatrix, rng: &mut ChaCha8Rng) -> Result<BeamformerSet> {
    let free: Vec<Vec<_>> = (0..3)
        .map(|_| random_orthonormal_columns(rng, 2 * EXTENSION, 2))
        .collect();

    let mut columns: Vec<Vec<Option<nalgebra::DVector<f64>>>> = free
        .into_iter()
        .map(|f| f.into_iter().map(Some).chain([None, None]).collect())
        .collect();
    for &(rx, (dt, ds), (st, ss)) in &ALIGNMENTS {
        let src = columns[st][ss].clone().expect("sources are free columns");
        let derived = alignment_rotation(channel, rx, dt, st, EXTENSION)?.apply(&src);
        columns[dt][ds] = Some(derived);
    }

    let mut b = SetBuilder::new(SchemeKind::AcsIc3);
    let mut index = [[0usize; STREAMS]; 3];
    for (t, cols) in columns.into_iter().enumerate() {
        for (s, col) in cols.into_iter().enumerate() {
            let col = col.expect("every column assigned");
            index[t][s] = b.stream(MessageId { rx: t, tx: t }, format!("V{}^{}", t + 1, s + 1), col);
        }
    }
    for &(rx, (dt, ds), (st, ss)) in &ALIGNMENTS {
        b.align(rx, index[dt][ds], index[st][ss], 1.0);
    }
    Ok(b.finish())
}
