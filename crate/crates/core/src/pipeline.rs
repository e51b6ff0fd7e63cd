//! Clip-level orchestration with scheduling-independent seeding.
//!
//! Every clip's seed is derived from `(master_seed, source_id)` alone, so a
//! batch produces the same bytes whatever the worker count or input order.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::frame::Clip;
use crate::policy::{self, AppliedPolicy, ClipShape, Policy};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub policy: Policy,
    pub master_seed: u64,
    pub workers: usize,
}

/// First eight bytes (little-endian) of `SHA-256(master_seed_le || source_id)`.
pub fn derive_seed(master_seed: u64, source_id: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update(source_id.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("sha256 has 32 bytes"))
}

/// Samples a policy for `clip` and applies it.
pub fn augment_clip(clip: &Clip, policy: &Policy, seed: u64) -> Result<(Clip, AppliedPolicy)> {
    let ap = policy::sample_policy(policy, ClipShape::of(clip), seed)?;
    let out = policy::apply_policy(&ap, clip)?;
    Ok((out, ap))
}

/// Runs `f` over `items` on a pool of `workers` threads. Results keep input
/// order and failures stay per item.
pub fn run_pool<I, T, F>(items: &[I], workers: usize, f: F) -> Result<Vec<Result<T>>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    if workers == 0 {
        return Err(Error::argument("worker count must be positive"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

/// Augments every clip with its derived seed.
pub fn augment_batch(clips: &[Clip], config: &RunConfig) -> Result<Vec<Result<(Clip, AppliedPolicy)>>> {
    if clips.is_empty() {
        return Err(Error::argument("batch is empty"));
    }
    config.policy.validate()?;
    run_pool(clips, config.workers, |clip| {
        augment_clip(clip, &config.policy, derive_seed(config.master_seed, clip.source_id()))
    })
}
