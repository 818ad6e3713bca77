use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BeamformerSet;
use crate::channel::ComplexChannelMatrix;
use crate::error::Result;
use crate::linalg::orthonormalize;
use crate::verify::independence_margin;

/// `count` i.i.d. Gaussian directions in `dim` real dimensions, normalized and then
/// orthonormalized in draw order.
pub(crate) fn random_orthonormal_columns<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Vec<DVector<f64>> {
    let raw: Vec<DVector<f64>> = (0..count)
        .map(|_| {
            let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
            let n = v.norm();
            v / n
        })
        .collect();
    orthonormalize(&raw)
}

/// Free-column draws tried per build; the best-conditioned one is kept.
pub(crate) const CANDIDATE_DRAWS: usize = 8;

/// Smallest singular value over receivers of the stacked desired and interference-basis
/// receive columns.
fn conditioning(set: &BeamformerSet, channel: &ComplexChannelMatrix) -> Result<f64> {
    Ok(independence_margin(set, channel)?
        .receivers
        .iter()
        .map(|r| r.sigma_min())
        .fold(f64::INFINITY, f64::min))
}

/// Runs `draw` [`CANDIDATE_DRAWS`] times on one seeded stream and keeps the set whose
/// worst receiver is best conditioned (first on ties). Every candidate is an exact
/// solution of the alignment equations; the choice only improves finite-SNR behaviour.
pub(crate) fn best_of_draws(
    channel: &ComplexChannelMatrix,
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<BeamformerSet>,
) -> Result<BeamformerSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, BeamformerSet)> = None;
    for _ in 0..CANDIDATE_DRAWS {
        let set = draw(&mut rng)?;
        let score = conditioning(&set, channel)?;
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, set));
        }
    }
    Ok(best.expect("at least one draw").1)
}
