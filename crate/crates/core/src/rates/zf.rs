use nalgebra::DVector;
use serde::Serialize;

use crate::channel::ComplexChannelMatrix;
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_basis, project_out, stack_columns};
use crate::schemes::BeamformerSet;
use crate::verify::DEPENDENT_THRESHOLD;

/// Unit-norm zero-forcing combiner for one desired stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Combiner {
    pub receiver: usize,
    pub stream: usize,
    pub vector: Vec<f64>,
    /// `wᵀ·Ū(φ_r,t)·v`, positive by convention.
    pub gain: f64,
}

/// Projects each desired receive image onto the orthogonal complement of every other
/// desired image and the deduplicated interference basis at its receiver.
pub fn zf_receive(set: &BeamformerSet, channel: &ComplexChannelMatrix) -> Result<Vec<Combiner>> {
    set.require_channel(channel)?;
    let dim = set.dim();
    let mut out = Vec::with_capacity(set.streams().len());
    for rx in 0..set.num_rx() {
        let desired = set.desired_streams(rx);
        let interference = set.interference_basis(rx);
        let images: Vec<DVector<f64>> = desired
            .iter()
            .map(|&s| set.effective_column(channel, rx, s))
            .collect::<Result<_>>()?;
        let interf: Vec<DVector<f64>> = interference
            .iter()
            .map(|&s| set.effective_column(channel, rx, s))
            .collect::<Result<_>>()?;
        for (k, &s) in desired.iter().enumerate() {
            let others: Vec<DVector<f64>> = images
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, c)| c.clone())
                .chain(interf.iter().cloned())
                .collect();
            let q = orthonormal_basis(&stack_columns(dim, &others), DEPENDENT_THRESHOLD);
            // a full-rank complement needs every other column kept
            if others.len() >= dim || q.ncols() < others.len() {
                return Err(Error::NoNullSpace { receiver: rx, stream: s });
            }
            let w = project_out(&images[k], &q);
            let n = w.norm();
            if n <= DEPENDENT_THRESHOLD {
                return Err(Error::NoNullSpace { receiver: rx, stream: s });
            }
            let w = w / n;
            let gain = w.dot(&images[k]);
            out.push(Combiner { receiver: rx, stream: s, vector: w.iter().copied().collect(), gain });
        }
    }
    Ok(out)
}
