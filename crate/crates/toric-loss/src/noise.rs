//! Per-trial error sampling: i.i.d. qubit loss followed by i.i.d. bit flips
//! on the surviving qubits.
//!
//! Reproducibility contract: a sample is a pure function of
//! `(params, size, seed)`. Each trial owns a ChaCha8 stream keyed by a
//! splitmix64 hash of `(master_seed, trial_index)`, so trials can run in any
//! order on any number of workers and still produce identical bits. Two
//! uniform draws are consumed per edge in dense index order regardless of
//! outcome, keeping the stream layout fixed.

use core::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{EdgeSet, TorusSize};

/// Name and provenance of the per-trial generator, surfaced in run metadata.
pub const GENERATOR: &str = "chacha8/splitmix64 (rand_chacha 0.3)";

/// Loss and computational error rates.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct NoiseParams {
    p_loss: f64,
    p_com: f64,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum ParamError {
    /// `p_loss` outside `[0, 1]`.
    LossRate(f64),
    /// `p_com` outside `[0, 0.5)`; at 0.5 and beyond the chain weights
    /// vanish or change sign.
    FlipRate(f64),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::LossRate(v) => write!(f, "p_loss must lie in [0, 1], got {v}"),
            ParamError::FlipRate(v) => write!(f, "p_com must lie in [0, 0.5), got {v}"),
        }
    }
}

impl core::error::Error for ParamError {}

impl NoiseParams {
    pub fn new(p_loss: f64, p_com: f64) -> Result<Self, ParamError> {
        if !(0.0..=1.0).contains(&p_loss) {
            return Err(ParamError::LossRate(p_loss));
        }
        if !(0.0..0.5).contains(&p_com) {
            return Err(ParamError::FlipRate(p_com));
        }
        Ok(NoiseParams { p_loss, p_com })
    }

    pub fn p_loss(self) -> f64 {
        self.p_loss
    }

    pub fn p_com(self) -> f64 {
        self.p_com
    }
}

/// Identifies one trial of one run; fully determines its sample.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TrialSeed {
    pub master_seed: u64,
    pub trial_index: u64,
}

/// One trial's error configuration. `lost` and `flipped` are disjoint:
/// flips act only on surviving qubits.
#[derive(Clone, Debug)]
pub struct ErrorSample {
    pub lost: EdgeSet,
    pub flipped: EdgeSet,
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The counter-based per-trial generator.
pub fn trial_rng(seed: TrialSeed) -> ChaCha8Rng {
    let mut state = seed
        .master_seed
        ^ seed.trial_index.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Sample losses at rate `p_loss`, then flips at rate `p_com` on survivors.
pub fn sample_errors(params: NoiseParams, size: TorusSize, seed: TrialSeed) -> ErrorSample {
    let mut rng = trial_rng(seed);
    let mut lost = EdgeSet::empty(size);
    let mut flipped = EdgeSet::empty(size);
    for index in 0..size.edge_count() {
        let u_loss: f64 = rng.gen();
        let u_flip: f64 = rng.gen();
        if u_loss < params.p_loss {
            lost.toggle_index(index);
        } else if u_flip < params.p_com {
            flipped.toggle_index(index);
        }
    }
    ErrorSample { lost, flipped }
}
