//! Randomized stepped-frequency radar (RSFR) signal model, block-coherence
//! analysis of its observation matrix, recovery-guarantee bounds and
//! block-sparse reconstruction.
//!
//! The crate is `no_std` with `alloc`. The `std` feature (on by default) only
//! switches the math backends to the platform `libm`; the `serde` feature
//! derives serialization for every public data type.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod codes;
pub mod error;
mod linalg;
pub mod matrix;
pub mod metrics;
pub mod params;
pub mod recovery;
pub mod rng;
pub mod scene;
pub mod spectral;

pub use codes::{draw_codes, FrequencyCodes};
pub use error::Error;
pub use matrix::{build_observation_matrix, ObservationMatrix};
pub use params::{snr_to_noise_power, DopplerMode, RadarParams};
pub use recovery::{recover, Algorithm, RecoveryResult, SolverConfig, SparsityHint};
pub use scene::{
    complex_noise, scene_to_vector, synthesize_measurement, synthesize_scene, BlockSparseVector, Measurement,
    Scatterer, Target, TargetScene,
};

pub use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
