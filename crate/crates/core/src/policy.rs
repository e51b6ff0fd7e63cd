//! Per-clip policy sampling for the RandAugment, TrivialAugment and
//! UniformAugment families.
//!
//! A [`Policy`] is a sampler configuration; [`sample_policy`] turns it into
//! an [`AppliedPolicy`], the complete record of one draw. Structural draws
//! (ops, gates, magnitudes, directions, erase boxes) come from one random
//! stream and every step's schedule from its own stream, so switching a
//! policy between static and dynamic mode never perturbs the structure.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Clip;
use crate::ops::{self, Direction, EraseRegion, OpKind, MAX_MAGNITUDE};
use crate::signal::{self, Schedule, ScheduleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSpace {
    Org,
    Mod,
    Wide,
    WideMod,
}

const MOD_OPS: [OpKind; 17] = OpKind::ALL;

impl SearchSpace {
    pub fn ops(self) -> &'static [OpKind] {
        match self {
            SearchSpace::Org | SearchSpace::Wide => &OpKind::CLASSIC,
            SearchSpace::Mod | SearchSpace::WideMod => &MOD_OPS,
        }
    }

    pub fn is_wide(self) -> bool {
        matches!(self, SearchSpace::Wide | SearchSpace::WideMod)
    }

    pub fn name(self) -> &'static str {
        match self {
            SearchSpace::Org => "org",
            SearchSpace::Mod => "mod",
            SearchSpace::Wide => "wide",
            SearchSpace::WideMod => "wide-mod",
        }
    }
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "org" => Ok(SearchSpace::Org),
            "mod" => Ok(SearchSpace::Mod),
            "wide" => Ok(SearchSpace::Wide),
            "wide-mod" | "widemod" => Ok(SearchSpace::WideMod),
            other => Err(Error::argument(format!("unknown search space {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    /// `n` ops with replacement, fixed magnitude, per-clip gate `p`.
    RandAugment { n: usize, magnitude: f64, p: f64 },
    /// One op, always applied, magnitude uniform over `{0, .., 30}`.
    TrivialAugment,
    /// `n` ops, gate probability and magnitude uniform per step.
    UniformAugment { n: usize },
}

impl Family {
    pub fn rand_augment() -> Self {
        Family::RandAugment {
            n: 2,
            magnitude: 9.0,
            p: 1.0,
        }
    }

    pub fn uniform_augment() -> Self {
        Family::UniformAugment { n: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "schedule", rename_all = "snake_case")]
pub enum Mode {
    Static,
    Dynamic(ScheduleKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub family: Family,
    pub mode: Mode,
    pub space: SearchSpace,
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        match self.family {
            Family::RandAugment { n, magnitude, p } => {
                if n == 0 {
                    return Err(Error::config("RandAugment needs N >= 1"));
                }
                if !(0.0..=MAX_MAGNITUDE).contains(&magnitude) {
                    return Err(Error::config(format!(
                        "RandAugment magnitude {magnitude} outside [0, 30]"
                    )));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::config(format!("probability {p} outside [0, 1]")));
                }
            }
            Family::UniformAugment { n } if n == 0 => {
                return Err(Error::config("UniformAugment needs N >= 1"));
            }
            _ => {}
        }
        if self.space.ops().is_empty() {
            return Err(Error::config("search space is empty"));
        }
        if let Mode::Dynamic(kind) = &self.mode {
            kind.validate()?;
        }
        Ok(())
    }
}

/// Frame count and size of the clip a policy will be applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClipShape {
    pub frames: usize,
    pub width: u32,
    pub height: u32,
}

impl ClipShape {
    pub fn of(clip: &Clip) -> Self {
        Self {
            frames: clip.len(),
            width: clip.width(),
            height: clip.height(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppliedStep {
    pub op: OpKind,
    pub applied: bool,
    pub direction: Direction,
    pub magnitude: f64,
    pub schedule: Schedule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<EraseRegion>,
}

/// One realized policy draw; enough to replay the augmentation exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppliedPolicy {
    pub family: Family,
    pub mode: Mode,
    pub space: SearchSpace,
    pub seed: u64,
    pub steps: Vec<AppliedStep>,
}

impl AppliedPolicy {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

struct Draw {
    op: OpKind,
    applied: bool,
    magnitude: f64,
}

fn pick_op<R: Rng + ?Sized>(space: SearchSpace, rng: &mut R) -> OpKind {
    let ops = space.ops();
    ops[rng.random_range(0..ops.len())]
}

fn schedule_rng(seed: u64, step: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step as u64 + 1);
    rng
}

/// Samples a concrete policy for a clip of the given shape.
pub fn sample_policy(policy: &Policy, shape: ClipShape, seed: u64) -> Result<AppliedPolicy> {
    policy.validate()?;
    if shape.frames == 0 {
        return Err(Error::argument("clip must have at least one frame"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = policy.space;

    let n = match policy.family {
        Family::RandAugment { n, .. } | Family::UniformAugment { n } => n,
        Family::TrivialAugment => 1,
    };
    let mut steps = Vec::with_capacity(n);
    for index in 0..n {
        let draw = match policy.family {
            Family::RandAugment { magnitude, p, .. } => {
                let op = pick_op(space, &mut rng);
                let gate: f64 = rng.random();
                Draw {
                    op,
                    applied: gate < p,
                    magnitude,
                }
            }
            Family::TrivialAugment => {
                let op = pick_op(space, &mut rng);
                let level = rng.random_range(0..=MAX_MAGNITUDE as u32);
                Draw {
                    op,
                    applied: true,
                    magnitude: level as f64,
                }
            }
            Family::UniformAugment { .. } => {
                let op = pick_op(space, &mut rng);
                let p: f64 = rng.random();
                let gate: f64 = rng.random();
                let magnitude = rng.random::<f64>() * MAX_MAGNITUDE;
                Draw {
                    op,
                    applied: gate < p,
                    magnitude,
                }
            }
        };
        let direction = Direction::from_bool(rng.random());
        let region = (draw.op == OpKind::DynamicRandomErase)
            .then(|| EraseRegion::sample(shape.width, shape.height, &mut rng));

        let schedule = match policy.mode {
            Mode::Dynamic(kind) if !draw.op.descriptor().parameterless => signal::sample_schedule(
                &kind,
                shape.frames,
                draw.magnitude,
                &mut schedule_rng(seed, index),
            )?,
            _ => Schedule::constant(shape.frames, draw.magnitude)?,
        };
        steps.push(AppliedStep {
            op: draw.op,
            applied: draw.applied,
            direction,
            magnitude: draw.magnitude,
            schedule,
            region,
        });
    }
    Ok(AppliedPolicy {
        family: policy.family,
        mode: policy.mode,
        space,
        seed,
        steps,
    })
}

/// Replays an applied policy on a clip. Gated-off steps skip the whole clip.
pub fn apply_policy(ap: &AppliedPolicy, clip: &Clip) -> Result<Clip> {
    if let Some(step) = ap.steps.iter().find(|s| s.schedule.len() != clip.len()) {
        return Err(Error::argument(format!(
            "{:?} schedule has {} values for a clip of {} frames",
            step.op,
            step.schedule.len(),
            clip.len()
        )));
    }
    let wide = ap.space.is_wide();
    let mut current = clip.clone();
    for step in ap.steps.iter().filter(|s| s.applied) {
        current = ops::apply_scheduled(
            step.op,
            &current,
            &step.schedule,
            step.direction,
            wide,
            step.region.as_ref(),
        )?;
    }
    Ok(current)
}
