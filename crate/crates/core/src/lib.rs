//! Video data augmentation with temporally-varying magnitudes.
//!
//! A static augmentation applies `op(frame, M)` with the same magnitude to
//! every frame of a clip. This crate instead draws a per-frame magnitude
//! schedule `[M_1, .., M_T]` (by default a Dirichlet-weighted sum of
//! min-max-normalized sinusoids) and applies `op(frame_t, M_t)`.
//!
//! Layout:
//!
//! - [`signal`]: schedule generation (Fourier sampling and baseline families).
//! - [`ops`]: pixel kernels and the magnitude to parameter mapping table.
//! - [`policy`]: RandAugment / TrivialAugment / UniformAugment style samplers.
//! - [`pipeline`]: per-clip and batched augmentation with stable seeding.
//! - [`metrics`]: smoothness and diversity statistics, affinity/diversity ratios.
//! - [`io`]: PNG image sequences and the raw clip container.

pub mod error;
pub mod frame;
pub mod io;
pub mod metrics;
pub mod numfmt;
pub mod ops;
pub mod pipeline;
pub mod policy;
pub mod signal;

pub use error::{Error, Result};
pub use frame::{Clip, Frame};
