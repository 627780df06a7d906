//! Detection-guided 3D semantic occupancy prediction at desk scale.
//!
//! The pipeline splits a scene into foreground objects and background
//! structure. A small two-stage detector finds foreground objects in the
//! input image, their 3D boxes seed dense per-object occupancy queries, and
//! a sparse lattice of background queries is refined coarse-to-fine with
//! top-K retention at every upsampling step. A mask-classification head
//! assigns semantic classes to the retained background voxels, and the two
//! streams are assembled into a full semantic voxel grid.
//!
//! Everything runs on the CPU in `f64` with seeded determinism: identical
//! configs and seeds produce bit-identical results, including training logs.
//! The `parallel` feature (default on) enables rayon data parallelism across
//! scenes and query rows; all parallel paths produce the same bits as the
//! sequential fallback.

pub mod config;
pub mod dataset;
pub mod detector;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod labelgen;
pub mod nn;
pub mod occdec;
pub mod semhead;
pub mod synth;
pub mod train;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
