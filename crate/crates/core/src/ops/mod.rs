//! Augmentation kernels and the magnitude to parameter mapping.
//!
//! Every op is driven by a magnitude on the shared `[0, 30]` scale. The
//! magnitude is mapped linearly from the op's zero-magnitude parameter
//! (usually its identity point) to one end of its parameter range; signed
//! ops pick the end from a per-clip direction. The table in
//! [`descriptors`] is the single source for these ranges and is exported
//! as JSON by [`mapping_table_json`].
//!
//! Kernels compute in `f32` and quantize to 8 bits only when writing the
//! output pixel (round half away from zero, then clamp).

mod color;
mod erase;
mod geometry;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Clip, Frame};
use crate::signal::{Interval, Schedule};

pub use erase::EraseRegion;

/// Upper end of the shared magnitude scale.
pub const MAX_MAGNITUDE: f64 = 30.0;

/// Fill colour for geometric out-of-bounds samples and erased boxes.
pub const FILL: [u8; 3] = [128, 128, 128];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    ShearX,
    ShearY,
    TranslateX,
    TranslateY,
    Rotate,
    AutoContrast,
    Invert,
    Equalize,
    Solarize,
    Posterize,
    Contrast,
    Color,
    Brightness,
    Sharpness,
    DynamicScale,
    DynamicColor,
    DynamicRandomErase,
}

impl OpKind {
    /// The fourteen image ops, in table order.
    pub const CLASSIC: [OpKind; 14] = [
        OpKind::ShearX,
        OpKind::ShearY,
        OpKind::TranslateX,
        OpKind::TranslateY,
        OpKind::Rotate,
        OpKind::AutoContrast,
        OpKind::Invert,
        OpKind::Equalize,
        OpKind::Solarize,
        OpKind::Posterize,
        OpKind::Contrast,
        OpKind::Color,
        OpKind::Brightness,
        OpKind::Sharpness,
    ];

    /// The three video-only ops.
    pub const VIDEO: [OpKind; 3] = [
        OpKind::DynamicScale,
        OpKind::DynamicColor,
        OpKind::DynamicRandomErase,
    ];

    pub const ALL: [OpKind; 17] = [
        OpKind::ShearX,
        OpKind::ShearY,
        OpKind::TranslateX,
        OpKind::TranslateY,
        OpKind::Rotate,
        OpKind::AutoContrast,
        OpKind::Invert,
        OpKind::Equalize,
        OpKind::Solarize,
        OpKind::Posterize,
        OpKind::Contrast,
        OpKind::Color,
        OpKind::Brightness,
        OpKind::Sharpness,
        OpKind::DynamicScale,
        OpKind::DynamicColor,
        OpKind::DynamicRandomErase,
    ];

    pub fn descriptor(self) -> &'static OpDescriptor {
        &DESCRIPTORS[self as usize]
    }
}

/// Sign of a signed op's parameter offset from identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Direction::Positive
        } else {
            Direction::Negative
        }
    }
}

impl From<Direction> for i8 {
    fn from(d: Direction) -> i8 {
        match d {
            Direction::Positive => 1,
            Direction::Negative => -1,
        }
    }
}

impl TryFrom<i8> for Direction {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Direction::Positive),
            -1 => Ok(Direction::Negative),
            other => Err(format!("direction must be 1 or -1, got {other}")),
        }
    }
}

/// Static description of one op's parameterization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpDescriptor {
    #[serde(rename = "op")]
    pub kind: OpKind,
    pub param_range: Interval,
    pub wide_range: Interval,
    /// Parameter at which the op leaves the frame untouched.
    #[serde(rename = "identity")]
    pub identity_param: Option<f64>,
    /// Parameter reached at magnitude 0.
    pub origin_param: f64,
    pub signed: bool,
    pub discrete: bool,
    pub parameterless: bool,
    pub magnitude_domain: Interval,
}

const MAG: Interval = Interval::new(0.0, MAX_MAGNITUDE);

const fn signed(kind: OpKind, std: (f64, f64), wide: (f64, f64), identity: f64) -> OpDescriptor {
    OpDescriptor {
        kind,
        param_range: Interval::new(std.0, std.1),
        wide_range: Interval::new(wide.0, wide.1),
        identity_param: Some(identity),
        origin_param: identity,
        signed: true,
        discrete: false,
        parameterless: false,
        magnitude_domain: MAG,
    }
}

const fn parameterless(kind: OpKind) -> OpDescriptor {
    OpDescriptor {
        kind,
        param_range: Interval::new(0.0, 1.0),
        wide_range: Interval::new(0.0, 1.0),
        identity_param: None,
        origin_param: 0.0,
        signed: false,
        discrete: false,
        parameterless: true,
        magnitude_domain: MAG,
    }
}

const fn unsigned(
    kind: OpKind,
    std: (f64, f64),
    wide: (f64, f64),
    identity: Option<f64>,
    origin: f64,
    discrete: bool,
) -> OpDescriptor {
    OpDescriptor {
        kind,
        param_range: Interval::new(std.0, std.1),
        wide_range: Interval::new(wide.0, wide.1),
        identity_param: identity,
        origin_param: origin,
        signed: false,
        discrete,
        parameterless: false,
        magnitude_domain: MAG,
    }
}

const ENHANCE: (f64, f64) = (0.1, 1.9);
const ENHANCE_WIDE: (f64, f64) = (0.01, 1.99);

/// Indexed by `OpKind as usize`.
static DESCRIPTORS: [OpDescriptor; 17] = [
    signed(OpKind::ShearX, (-0.3, 0.3), (-0.5, 0.5), 0.0),
    signed(OpKind::ShearY, (-0.3, 0.3), (-0.5, 0.5), 0.0),
    signed(OpKind::TranslateX, (-0.45, 0.45), (-0.5, 0.5), 0.0),
    signed(OpKind::TranslateY, (-0.45, 0.45), (-0.5, 0.5), 0.0),
    signed(OpKind::Rotate, (-30.0, 30.0), (-50.0, 50.0), 0.0),
    parameterless(OpKind::AutoContrast),
    parameterless(OpKind::Invert),
    parameterless(OpKind::Equalize),
    unsigned(OpKind::Solarize, (0.0, 256.0), (0.0, 256.0), Some(256.0), 256.0, true),
    unsigned(OpKind::Posterize, (4.0, 8.0), (2.0, 8.0), Some(8.0), 8.0, true),
    signed(OpKind::Contrast, ENHANCE, ENHANCE_WIDE, 1.0),
    signed(OpKind::Color, ENHANCE, ENHANCE_WIDE, 1.0),
    signed(OpKind::Brightness, ENHANCE, ENHANCE_WIDE, 1.0),
    signed(OpKind::Sharpness, ENHANCE, ENHANCE_WIDE, 1.0),
    signed(OpKind::DynamicScale, (0.667, 1.5), (0.5, 2.0), 1.0),
    signed(OpKind::DynamicColor, (-0.1, 0.1), (-0.3, 0.3), 0.0),
    // Area fraction of the frame; an empty box (0) is the no-op.
    unsigned(OpKind::DynamicRandomErase, (0.1, 0.3), (0.1, 0.6), Some(0.0), 0.1, false),
];

/// The full mapping table in [`OpKind::ALL`] order.
pub fn descriptors() -> &'static [OpDescriptor] {
    &DESCRIPTORS
}

/// The mapping table as pretty-printed JSON.
pub fn mapping_table_json() -> String {
    serde_json::to_string_pretty(&DESCRIPTORS[..]).expect("descriptor table serializes")
}

impl OpDescriptor {
    pub fn range(&self, wide: bool) -> Interval {
        if wide {
            self.wide_range
        } else {
            self.param_range
        }
    }

    /// Parameters `apply` accepts: the wide range widened to the identity.
    pub fn accepted_range(&self) -> Interval {
        let r = self.wide_range.lo.min(self.param_range.lo);
        let h = self.wide_range.hi.max(self.param_range.hi);
        match self.identity_param {
            Some(id) => Interval::new(r.min(id), h.max(id)),
            None => Interval::new(r, h),
        }
    }

    /// Endpoint reached at full magnitude.
    fn extreme(&self, direction: Direction, wide: bool) -> f64 {
        let r = self.range(wide);
        if self.signed {
            match direction {
                Direction::Positive => r.hi,
                Direction::Negative => r.lo,
            }
        } else if (r.hi - self.origin_param).abs() >= (r.lo - self.origin_param).abs() {
            r.hi
        } else {
            r.lo
        }
    }

    /// Linear map from magnitude (clamped to `[0, 30]`) to a parameter.
    pub fn magnitude_to_param(&self, magnitude: f64, direction: Direction, wide: bool) -> f64 {
        let t = magnitude.clamp(0.0, MAX_MAGNITUDE) / MAX_MAGNITUDE;
        let p = self.origin_param * (1.0 - t) + self.extreme(direction, wide) * t;
        if self.discrete {
            p.round()
        } else {
            p
        }
    }
}

pub fn magnitude_to_param(kind: OpKind, magnitude: f64, direction: Direction, wide: bool) -> f64 {
    kind.descriptor()
        .magnitude_to_param(magnitude, direction, wide)
}

#[inline]
pub(crate) fn quantize(v: f32) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Applies `kind` with an already-mapped parameter to a single frame.
pub fn apply(kind: OpKind, frame: &Frame, param: f64, region: Option<&EraseRegion>) -> Result<Frame> {
    if !param.is_finite() {
        return Err(Error::argument(format!("{kind:?}: non-finite parameter {param}")));
    }
    let desc = kind.descriptor();
    if !desc.parameterless && !desc.accepted_range().contains(param) {
        return Err(Error::argument(format!(
            "{kind:?}: parameter {param} outside {}",
            desc.accepted_range()
        )));
    }
    let p = param as f32;
    let out = match kind {
        OpKind::ShearX => geometry::shear_x(frame, p),
        OpKind::ShearY => geometry::shear_y(frame, p),
        OpKind::TranslateX => geometry::translate_x(frame, p),
        OpKind::TranslateY => geometry::translate_y(frame, p),
        OpKind::Rotate => geometry::rotate(frame, p),
        OpKind::DynamicScale => geometry::scale(frame, p),
        OpKind::AutoContrast => color::autocontrast(frame),
        OpKind::Invert => color::invert(frame),
        OpKind::Equalize => color::equalize(frame),
        OpKind::Solarize => color::solarize(frame, param.round() as u32),
        OpKind::Posterize => color::posterize(frame, param.round() as u32),
        OpKind::Contrast => color::contrast(frame, p),
        OpKind::Color => color::saturation(frame, p),
        OpKind::Brightness => color::brightness(frame, p),
        OpKind::Sharpness => color::sharpness(frame, p),
        OpKind::DynamicColor => color::hue_shift(frame, p),
        OpKind::DynamicRandomErase => {
            let region = region.ok_or_else(|| {
                Error::argument("DynamicRandomErase requires an erase region")
            })?;
            erase::erase(frame, param, region)?
        }
    };
    Ok(out)
}

/// Applies `kind` to every frame with that frame's scheduled magnitude.
///
/// Frames are processed in parallel; each one depends only on its own
/// magnitude and the per-clip `direction` and `region`.
pub fn apply_scheduled(
    kind: OpKind,
    clip: &Clip,
    schedule: &Schedule,
    direction: Direction,
    wide: bool,
    region: Option<&EraseRegion>,
) -> Result<Clip> {
    if schedule.len() != clip.len() {
        return Err(Error::argument(format!(
            "schedule has {} values for a clip of {} frames",
            schedule.len(),
            clip.len()
        )));
    }
    let desc = kind.descriptor();
    let frames = clip
        .frames()
        .par_iter()
        .zip(schedule.values().par_iter())
        .map(|(frame, &m)| {
            let param = desc.magnitude_to_param(m, direction, wide);
            apply(kind, frame, param, region)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(clip.with_frames(frames))
}
