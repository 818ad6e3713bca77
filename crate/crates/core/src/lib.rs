//! Interference alignment with asymmetric complex signaling.
//!
//! Constant complex channels are lifted to real 2×2 rotations so that the real and
//! imaginary parts of each symbol can be beamformed separately. The crate builds the
//! alignment schemes over symbol extensions, checks their phase conditions and rank
//! properties, evaluates zero-forcing rates and fitted degrees of freedom, and enumerates
//! the allocation model that bounds linear schemes on the 3-user channel.

pub mod angle;
pub mod bound;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod rates;
pub mod schemes;
pub mod sweep;
pub mod verify;

pub use channel::{
    construct_special_channel, extend_rotation, rotation_matrix, sample_channel, ChannelEntry,
    ComplexChannelMatrix, ExtendedRotation, RealLiftedVector, SpecialChannel,
};
pub use error::{Error, Result};
pub use schemes::{BeamformerSet, Cognition, SchemeDescriptor, SchemeKind};
pub use num_rational::Ratio;
