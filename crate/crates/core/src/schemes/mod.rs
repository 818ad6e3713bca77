//! Beamformer constructions for the alignment schemes.
//!
//! A [`BeamformerSet`] lists real streams, each a unit-norm column in the `2S`-dimensional
//! lifted signal space, together with the alignment equations the construction enforces.
//! An alignment equation at receiver `r` states
//! `Ū(φ_r,a)·v_derived = scale · Ū(φ_r,b)·v_source`, where `a` and `b` are the
//! transmitters of the two streams. The derived stream is then redundant in the
//! interference space of `r`.

mod acs_ic3;
mod phase_alignment;
mod random;
mod uplinks;
mod x_channel;

pub use acs_ic3::{build_acs_ic3, build_acs_ic3_unchecked};
pub use phase_alignment::build_phase_alignment;
pub use uplinks::build_uplinks;
pub use x_channel::{build_cognitive_x, build_x_channel};

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_rational::Ratio;
use serde::Serialize;

use crate::channel::ComplexChannelMatrix;
use crate::error::{Error, Result};
use crate::linalg::{singular_values, stack_columns};
use crate::verify::conditions::ConditionSet;

/// Which side of the cognitive X channel knows message `W_11` a priori.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cognition {
    Receiver,
    Transmitter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    PhaseAlignment,
    AcsIc3,
    XChannel,
    CognitiveX(Cognition),
    Uplinks,
}

/// Static facts about a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeDescriptor {
    pub kind: SchemeKind,
    pub extension: usize,
    pub num_rx: usize,
    pub num_tx: usize,
    pub streams_per_tx: Vec<usize>,
    pub claimed_dof: Ratio<usize>,
    pub conditions: ConditionSet,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::PhaseAlignment,
        SchemeKind::AcsIc3,
        SchemeKind::XChannel,
        SchemeKind::CognitiveX(Cognition::Receiver),
        SchemeKind::CognitiveX(Cognition::Transmitter),
        SchemeKind::Uplinks,
    ];

    pub fn descriptor(&self) -> SchemeDescriptor {
        let (extension, num_rx, streams_per_tx, conditions) = match self {
            SchemeKind::PhaseAlignment => (1, 3, vec![1, 1, 1], ConditionSet::PhaseAlignment),
            SchemeKind::AcsIc3 => (5, 3, vec![4, 4, 4], ConditionSet::AcsIc3),
            SchemeKind::XChannel => (3, 2, vec![4, 4], ConditionSet::XChannel),
            SchemeKind::CognitiveX(_) => (1, 2, vec![2, 1], ConditionSet::XChannel),
            SchemeKind::Uplinks => (3, 2, vec![2, 2, 2, 2], ConditionSet::Uplinks),
        };
        let total: usize = streams_per_tx.iter().sum();
        SchemeDescriptor {
            kind: *self,
            extension,
            num_rx,
            num_tx: streams_per_tx.len(),
            claimed_dof: Ratio::new(total, 2 * extension),
            streams_per_tx,
            conditions,
        }
    }

    /// Builds the scheme's beamformers. `seed` drives the random free columns of the
    /// schemes that have them and is ignored otherwise.
    pub fn build(&self, channel: &ComplexChannelMatrix, seed: u64) -> Result<BeamformerSet> {
        match self {
            SchemeKind::PhaseAlignment => build_phase_alignment(channel),
            SchemeKind::AcsIc3 => build_acs_ic3(channel, seed),
            SchemeKind::XChannel => build_x_channel(channel, seed),
            SchemeKind::CognitiveX(c) => build_cognitive_x(channel, *c),
            SchemeKind::Uplinks => build_uplinks(channel, seed),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::PhaseAlignment => "phase-align",
            SchemeKind::AcsIc3 => "acs-ic3",
            SchemeKind::XChannel => "x-channel",
            SchemeKind::CognitiveX(Cognition::Receiver) => "cognitive-x",
            SchemeKind::CognitiveX(Cognition::Transmitter) => "cognitive-x-tx",
            SchemeKind::Uplinks => "uplinks",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .iter()
            .copied()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown scheme `{s}`")))
    }
}

/// Message from transmitter `tx` to receiver `rx` (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MessageId {
    pub rx: usize,
    pub tx: usize,
}

impl fmt::Display for MessageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}{}", self.rx + 1, self.tx + 1)
    }
}

/// One real, separately encoded stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Stream {
    pub message: MessageId,
    /// Position within the message, zero-based.
    pub index: usize,
    pub label: String,
    /// Fraction of the transmitter's block power budget assigned to this stream.
    pub power_fraction: f64,
    column: DVector<f64>,
}

impl Stream {
    pub fn tx(&self) -> usize {
        self.message.tx
    }

    pub fn rx(&self) -> usize {
        self.message.rx
    }

    pub fn column(&self) -> &DVector<f64> {
        &self.column
    }
}

/// `Ū(φ_{receiver, tx(derived)})·v_derived = scale · Ū(φ_{receiver, tx(source)})·v_source`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlignmentEquation {
    pub receiver: usize,
    pub derived: usize,
    pub source: usize,
    pub scale: f64,
}

/// Interference from `message` is known, and removed, at `receiver`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cancellation {
    pub receiver: usize,
    pub message: MessageId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet {
    kind: SchemeKind,
    extension: usize,
    num_rx: usize,
    num_tx: usize,
    streams: Vec<Stream>,
    alignments: Vec<AlignmentEquation>,
    cancellations: Vec<Cancellation>,
}

/// Collects streams for a scheme and fills in equal power fractions on `finish`.
pub(crate) struct SetBuilder {
    set: BeamformerSet,
}

impl SetBuilder {
    pub(crate) fn new(kind: SchemeKind) -> Self {
        let d = kind.descriptor();
        Self {
            set: BeamformerSet {
                kind,
                extension: d.extension,
                num_rx: d.num_rx,
                num_tx: d.num_tx,
                streams: Vec::new(),
                alignments: Vec::new(),
                cancellations: Vec::new(),
            },
        }
    }

    pub(crate) fn stream(&mut self, message: MessageId, label: String, column: DVector<f64>) -> usize {
        debug_assert_eq!(column.len(), 2 * self.set.extension);
        let index = self.set.streams.iter().filter(|s| s.message == message).count();
        self.set.streams.push(Stream { message, index, label, power_fraction: 0.0, column });
        self.set.streams.len() - 1
    }

    pub(crate) fn align(&mut self, receiver: usize, derived: usize, source: usize, scale: f64) {
        self.set.alignments.push(AlignmentEquation { receiver, derived, source, scale });
    }

    pub(crate) fn cancel(&mut self, receiver: usize, message: MessageId) {
        self.set.cancellations.push(Cancellation { receiver, message });
    }

    pub(crate) fn finish(mut self) -> BeamformerSet {
        let counts = self.set.streams_per_tx();
        for s in &mut self.set.streams {
            s.power_fraction = 1.0 / counts[s.message.tx] as f64;
        }
        self.set
    }
}

impl BeamformerSet {
    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn extension(&self) -> usize {
        self.extension
    }

    /// Real signal-space dimension `2S`.
    pub fn dim(&self) -> usize {
        2 * self.extension
    }

    pub fn num_rx(&self) -> usize {
        self.num_rx
    }

    pub fn num_tx(&self) -> usize {
        self.num_tx
    }

    pub fn streams(&self) -> &[Stream] {
        &self.streams
    }

    pub fn alignments(&self) -> &[AlignmentEquation] {
        &self.alignments
    }

    pub fn cancellations(&self) -> &[Cancellation] {
        &self.cancellations
    }

    pub fn descriptor(&self) -> SchemeDescriptor {
        self.kind.descriptor()
    }

    /// Mutable access to a stream's column, for perturbation experiments. Callers are
    /// responsible for the unit-norm invariant.
    pub fn column_mut(&mut self, stream: usize) -> &mut DVector<f64> {
        &mut self.streams[stream].column
    }

    pub fn streams_per_tx(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_tx];
        for s in &self.streams {
            counts[s.message.tx] += 1;
        }
        counts
    }

    /// Messages in order of first appearance.
    pub fn messages(&self) -> Vec<MessageId> {
        let mut out: Vec<MessageId> = Vec::new();
        for s in &self.streams {
            if !out.contains(&s.message) {
                out.push(s.message);
            }
        }
        out
    }

    pub fn require_channel(&self, channel: &ComplexChannelMatrix) -> Result<()> {
        channel.require_shape(self.num_rx, self.num_tx)
    }

    /// `Ū(φ_{rx, tx(stream)})·v_stream`, the stream's receive direction at `rx` without
    /// the link magnitude.
    pub fn effective_column(&self, channel: &ComplexChannelMatrix, rx: usize, stream: usize) -> Result<DVector<f64>> {
        let s = &self.streams[stream];
        Ok(channel.rotation(rx, s.tx(), self.extension)?.apply(&s.column))
    }

    pub fn desired_streams(&self, rx: usize) -> Vec<usize> {
        (0..self.streams.len()).filter(|&i| self.streams[i].rx() == rx).collect()
    }

    /// Streams that reach `rx` as interference (excluding cancelled messages).
    pub fn interfering_streams(&self, rx: usize) -> Vec<usize> {
        (0..self.streams.len())
            .filter(|&i| {
                let m = self.streams[i].message;
                m.rx != rx && !self.cancellations.iter().any(|c| c.receiver == rx && c.message == m)
            })
            .collect()
    }

    /// Interfering streams with the derived member of every alignment at `rx` removed.
    pub fn interference_basis(&self, rx: usize) -> Vec<usize> {
        let derived: Vec<usize> = self
            .alignments
            .iter()
            .filter(|a| a.receiver == rx)
            .map(|a| a.derived)
            .collect();
        self.interfering_streams(rx)
            .into_iter()
            .filter(|i| !derived.contains(i))
            .collect()
    }

    /// Checks the structural invariants: unit-norm columns, per-transmitter power
    /// fractions summing to at most one, and linearly independent columns per transmitter.
    pub fn validate(&self) -> Result<()> {
        for s in &self.streams {
            if (s.column.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Degenerate(format!("column {} has norm {}", s.label, s.column.norm())));
            }
        }
        for tx in 0..self.num_tx {
            let cols: Vec<DVector<f64>> = self
                .streams
                .iter()
                .filter(|s| s.tx() == tx)
                .map(|s| s.column.clone())
                .collect();
            let budget: f64 = self.streams.iter().filter(|s| s.tx() == tx).map(|s| s.power_fraction).sum();
            if budget > 1.0 + 1e-12 {
                return Err(Error::Degenerate(format!("transmitter {} exceeds its power budget", tx + 1)));
            }
            let sv = singular_values(&stack_columns(self.dim(), &cols));
            if sv.last().is_some_and(|&s| s <= 1e-9) {
                return Err(Error::Degenerate(format!("transmitter {} columns are dependent", tx + 1)));
            }
        }
        Ok(())
    }
}

/// Fails with [`Error::Infeasible`] when the scheme's conditions do not hold on `channel`.
pub(crate) fn require_feasible(kind: SchemeKind, channel: &ComplexChannelMatrix) -> Result<()> {
    let report = crate::verify::conditions::check_conditions(channel, kind.descriptor().conditions)?;
    if report.passes() {
        Ok(())
    } else {
        Err(Error::Infeasible { scheme: kind.to_string(), failed: report.failed() })
    }
}

/// Rotation that maps a source stream onto the derived one so that both arrive along the
/// same direction at `rx`: `Ū(φ_{rx,src_tx} − φ_{rx,der_tx})`.
pub(crate) fn alignment_rotation(
    channel: &ComplexChannelMatrix,
    rx: usize,
    derived_tx: usize,
    source_tx: usize,
    extension: usize,
) -> Result<crate::channel::ExtendedRotation> {
    crate::channel::ExtendedRotation::new(channel.phase(rx, source_tx) - channel.phase(rx, derived_tx), extension)
}
