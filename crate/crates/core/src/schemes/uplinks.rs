use rand_chacha::ChaCha8Rng;

use super::random::{best_of_draws, random_orthonormal_columns};
use super::{alignment_rotation, require_feasible, BeamformerSet, MessageId, SchemeKind, SetBuilder};
use crate::channel::ComplexChannelMatrix;
use crate::error::Result;

const EXTENSION: usize = 3;

/// Two interfering 2-user uplinks: transmitters 1, 2 serve receiver 1 and transmitters
/// 3, 4 serve receiver 2. Two real streams per transmitter over a three-symbol extension;
/// the cell-1 pair aligns at receiver 2 and the cell-2 pair at receiver 1.
pub fn build_uplinks(channel: &ComplexChannelMatrix, seed: u64) -> Result<BeamformerSet> {
    channel.require_shape(2, 4)?;
    let kind = SchemeKind::Uplinks;
    require_feasible(kind, channel)?;
    best_of_draws(channel, seed, |rng| draw(channel, rng))
}

fn draw(channel: &ComplexChannelMatrix, rng: &mut ChaCha8Rng) -> Result<BeamformerSet> {
    let kind = SchemeKind::Uplinks;
    let v1 = random_orthonormal_columns(rng, 2 * EXTENSION, 2);
    let v3 = random_orthonormal_columns(rng, 2 * EXTENSION, 2);
    let to_v2 = alignment_rotation(channel, 1, 1, 0, EXTENSION)?;
    let to_v4 = alignment_rotation(channel, 0, 3, 2, EXTENSION)?;

    let mut b = SetBuilder::new(kind);
    let cell = |b: &mut SetBuilder, free: &[nalgebra::DVector<f64>], rot: &crate::channel::ExtendedRotation, rx: usize, txs: (usize, usize)| {
        let src: Vec<usize> = free
            .iter()
            .enumerate()
            .map(|(i, c)| b.stream(MessageId { rx, tx: txs.0 }, format!("V{}^{}", txs.0 + 1, i + 1), c.clone()))
            .collect();
        for (i, c) in free.iter().enumerate() {
            let s = b.stream(MessageId { rx, tx: txs.1 }, format!("V{}^{}", txs.1 + 1, i + 1), rot.apply(c));
            b.align(1 - rx, s, src[i], 1.0);
        }
    };
    cell(&mut b, &v1, &to_v2, 0, (0, 1));
    cell(&mut b, &v3, &to_v4, 1, (2, 3));
    Ok(b.finish())
}
