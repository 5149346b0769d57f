//! Loss-tolerant error correction on the toric code.
//!
//! Physical qubits live on the edges of an `L × L` periodic square lattice.
//! Each qubit is independently lost with rate `p_loss`; survivors suffer
//! independent bit flips with rate `p_com`. Lost qubits merge the adjacent
//! plaquette stabilisers into *superplaquettes*; parities of error chains
//! crossing superplaquette boundaries are still measurable and are matched
//! up by an exact minimum-weight perfect matching over shortest-path
//! distances on a re-weighted ("restored") lattice. A trial succeeds when
//! the combined error-plus-correction chain is homologically trivial.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through [`libm`] so results are bit-identical across platforms. The
//! companion `toric-loss-cli` crate adds the worker pool, file formats and
//! command-line front end.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod decoder;
#[cfg(test)]
mod fixtures;
pub mod homology;
pub mod lattice;
pub mod loss;
mod matching;
mod math;
pub mod noise;
pub mod scaling;
pub mod syndrome;
pub mod trial;

pub use homology::TrialOutcome;
pub use lattice::{EdgeId, EdgeSet, Orientation, PlaquetteId, StarId, TorusSize};
pub use noise::{ErrorSample, NoiseParams, TrialSeed};
pub use trial::{Accounting, GridPoint, GridResult};
