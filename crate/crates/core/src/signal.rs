//! Per-frame magnitude schedules.
//!
//! The main generator is Fourier sampling: a schedule is the convex
//! combination of `C` sinusoidal bases, each min-max normalized into
//! `[M - M*A_b, M + M*A_b]`:
//!
//! ```text
//! s_b[t] = sin(2 * f_b * pi * k / (T - 1)),   k = o_b + 1 + t,  t = 0..T
//! M_t    = sum_b w_b * norm_b(s_b)[t]
//! ```
//!
//! with `w ~ Dirichlet(1)`, `f_b ~ U(freq_range)`, `A_b ~ U(amp_range)` and
//! `o_b ~ U{0..T-1}`. The baseline families (static, linear ramp, single
//! sinusoid, per-frame random, Gaussian-smoothed random) live here too so
//! they can be compared on equal footing.
//!
//! All schedules are evaluated as `M + deviation`, where the deviation is
//! proportional to `M * A`. With zero amplitude this makes every family
//! return exactly `M`, which is what lets a dynamic policy degrade
//! bit-for-bit to its static counterpart.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfmt;

/// Tolerance on the Dirichlet weights summing to one.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// A closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Uniform draw. Always consumes exactly one value from `rng`, even for
    /// a degenerate interval, so random streams stay aligned across configs.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.lo + (self.hi - self.lo) * u
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Parses `LO:HI`.
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::argument(format!("expected LO:HI, got {s:?}")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::argument(format!("bad bound {v:?} in {s:?}: {e}")))
        };
        let iv = Interval::new(parse(lo)?, parse(hi)?);
        if !iv.is_valid() {
            return Err(Error::argument(format!("empty or non-finite interval {s:?}")));
        }
        Ok(iv)
    }
}

/// One sinusoidal basis of a Fourier-sampled schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierBasis {
    pub weight: f64,
    /// Cycles per `T - 1` samples.
    pub frequency: f64,
    pub amplitude: f64,
    /// Integer sample shift in `0..T`.
    pub offset: usize,
}

impl FourierBasis {
    pub const fn new(weight: f64, frequency: f64, amplitude: f64, offset: usize) -> Self {
        Self {
            weight,
            frequency,
            amplitude,
            offset,
        }
    }

    fn validate(&self, frames: usize) -> Result<()> {
        if !(self.weight >= 0.0 && self.weight.is_finite()) {
            return Err(Error::config(format!("basis weight {} must be >= 0", self.weight)));
        }
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(Error::config(format!(
                "basis frequency {} must be > 0",
                self.frequency
            )));
        }
        if !(0.0..=1.0).contains(&self.amplitude) {
            return Err(Error::config(format!(
                "basis amplitude {} outside [0, 1]",
                self.amplitude
            )));
        }
        if self.offset >= frames {
            return Err(Error::config(format!(
                "basis offset {} outside 0..{frames}",
                self.offset
            )));
        }
        Ok(())
    }
}

/// Distributions the Fourier bases are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierConfig {
    pub num_bases: usize,
    pub freq_range: Interval,
    pub amp_range: Interval,
    pub offsets_enabled: bool,
}

impl Default for FourierConfig {
    fn default() -> Self {
        Self {
            num_bases: 3,
            freq_range: Interval::new(0.2, 1.5),
            amp_range: Interval::new(0.0, 1.0),
            offsets_enabled: true,
        }
    }
}

impl FourierConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_bases == 0 {
            return Err(Error::config("number of bases must be at least 1"));
        }
        if !self.freq_range.is_valid() || self.freq_range.lo <= 0.0 {
            return Err(Error::config(format!(
                "frequency range {} must be non-empty with a positive lower bound",
                self.freq_range
            )));
        }
        validate_amp_range(self.amp_range)
    }
}

fn validate_amp_range(amp: Interval) -> Result<()> {
    if !amp.is_valid() || amp.lo < 0.0 || amp.hi > 1.0 {
        return Err(Error::config(format!(
            "amplitude range {amp} must be a non-empty subset of [0, 1]"
        )));
    }
    Ok(())
}

/// Which schedule family to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleKind {
    Static,
    Linear {
        with_offset: bool,
        amp_range: Interval,
    },
    Sinusoidal {
        with_offset: bool,
        amp_range: Interval,
    },
    RandomPerFrame {
        amp_range: Interval,
    },
    RandomGaussianSmoothed {
        kernel_width: usize,
        amp_range: Interval,
    },
    Fourier(FourierConfig),
}

impl Default for ScheduleKind {
    fn default() -> Self {
        ScheduleKind::Fourier(FourierConfig::default())
    }
}

/// Kernel width used by the Gaussian-smoothed baseline unless overridden.
pub const DEFAULT_GAUSSIAN_WIDTH: usize = 5;

const DEFAULT_AMP: Interval = Interval::new(0.0, 1.0);

impl ScheduleKind {
    pub fn linear() -> Self {
        ScheduleKind::Linear {
            with_offset: true,
            amp_range: DEFAULT_AMP,
        }
    }

    pub fn sinusoidal() -> Self {
        ScheduleKind::Sinusoidal {
            with_offset: true,
            amp_range: DEFAULT_AMP,
        }
    }

    pub fn random_per_frame() -> Self {
        ScheduleKind::RandomPerFrame {
            amp_range: DEFAULT_AMP,
        }
    }

    pub fn random_gaussian() -> Self {
        ScheduleKind::RandomGaussianSmoothed {
            kernel_width: DEFAULT_GAUSSIAN_WIDTH,
            amp_range: DEFAULT_AMP,
        }
    }

    /// The default-configured kind for a name returned by [`ScheduleKind::name`].
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "static" => ScheduleKind::Static,
            "linear" => ScheduleKind::linear(),
            "sine" => ScheduleKind::sinusoidal(),
            "random" => ScheduleKind::random_per_frame(),
            "random-gauss" => ScheduleKind::random_gaussian(),
            "fourier" => ScheduleKind::default(),
            _ => return None,
        })
    }

    /// Short stable name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Static => "static",
            ScheduleKind::Linear { .. } => "linear",
            ScheduleKind::Sinusoidal { .. } => "sine",
            ScheduleKind::RandomPerFrame { .. } => "random",
            ScheduleKind::RandomGaussianSmoothed { .. } => "random-gauss",
            ScheduleKind::Fourier(_) => "fourier",
        }
    }

    pub fn amp_range(&self) -> Option<Interval> {
        match *self {
            ScheduleKind::Static => None,
            ScheduleKind::Linear { amp_range, .. }
            | ScheduleKind::Sinusoidal { amp_range, .. }
            | ScheduleKind::RandomPerFrame { amp_range }
            | ScheduleKind::RandomGaussianSmoothed { amp_range, .. } => Some(amp_range),
            ScheduleKind::Fourier(cfg) => Some(cfg.amp_range),
        }
    }

    /// Same family with a different amplitude range.
    pub fn with_amp_range(self, amp: Interval) -> Self {
        match self {
            ScheduleKind::Static => ScheduleKind::Static,
            ScheduleKind::Linear { with_offset, .. } => ScheduleKind::Linear {
                with_offset,
                amp_range: amp,
            },
            ScheduleKind::Sinusoidal { with_offset, .. } => ScheduleKind::Sinusoidal {
                with_offset,
                amp_range: amp,
            },
            ScheduleKind::RandomPerFrame { .. } => ScheduleKind::RandomPerFrame { amp_range: amp },
            ScheduleKind::RandomGaussianSmoothed { kernel_width, .. } => {
                ScheduleKind::RandomGaussianSmoothed {
                    kernel_width,
                    amp_range: amp,
                }
            }
            ScheduleKind::Fourier(cfg) => ScheduleKind::Fourier(FourierConfig {
                amp_range: amp,
                ..cfg
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ScheduleKind::Static => Ok(()),
            ScheduleKind::Fourier(cfg) => cfg.validate(),
            ScheduleKind::RandomGaussianSmoothed {
                kernel_width,
                amp_range,
            } => {
                if *kernel_width == 0 {
                    return Err(Error::config("gaussian kernel width must be positive"));
                }
                validate_amp_range(*amp_range)
            }
            other => validate_amp_range(other.amp_range().expect("non-static kind")),
        }
    }
}

/// Per-frame magnitudes for one operation over one clip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    values: Vec<f64>,
    base_magnitude: f64,
    /// Basis tuples behind a Fourier or sinusoidal draw; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    bases: Vec<FourierBasis>,
}

impl Schedule {
    /// `frames` copies of `magnitude`.
    pub fn constant(frames: usize, magnitude: f64) -> Result<Self> {
        check_args(frames, magnitude)?;
        Ok(Self {
            values: vec![magnitude; frames],
            base_magnitude: magnitude,
            bases: Vec::new(),
        })
    }

    /// A schedule given frame by frame. The base magnitude is the mean.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::argument("schedule length must be at least 1"));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::argument(format!("magnitudes must be finite and >= 0, got {v}")));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(Self {
            values,
            base_magnitude: mean,
            bases: Vec::new(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn base_magnitude(&self) -> f64 {
        self.base_magnitude
    }

    pub fn bases(&self) -> &[FourierBasis] {
        &self.bases
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    pub fn total_variation(&self) -> f64 {
        total_variation(self)
    }

    /// `frame,magnitude` rows, magnitudes to 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame,magnitude\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{}\n", numfmt::significant(*v, 9)));
        }
        out
    }
}

fn check_args(frames: usize, magnitude: f64) -> Result<()> {
    if frames == 0 {
        return Err(Error::argument("schedule length must be at least 1"));
    }
    if !(magnitude >= 0.0 && magnitude.is_finite()) {
        return Err(Error::argument(format!(
            "base magnitude must be finite and >= 0, got {magnitude}"
        )));
    }
    Ok(())
}

/// Sum of absolute frame-to-frame differences; zero for a single frame.
pub fn total_variation(schedule: &Schedule) -> f64 {
    schedule
        .values
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum()
}

/// Maps `raw` onto `[M - M*A, M + M*A]` by min-max normalization, returned
/// as deviations from `M`. A flat signal maps to zero deviation.
fn normalized_deviation(raw: &[f64], magnitude: f64, amplitude: f64) -> Vec<f64> {
    let (min, max) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let half = magnitude * amplitude;
    if max == min {
        return vec![0.0; raw.len()];
    }
    let span = max - min;
    raw.iter()
        .map(|&v| -half + (v - min) / span * (2.0 * half))
        .collect()
}

fn phase_denominator(frames: usize) -> f64 {
    if frames > 1 {
        (frames - 1) as f64
    } else {
        1.0
    }
}

/// Draws the basis tuples for one Fourier schedule.
pub fn sample_fourier_bases<R: Rng + ?Sized>(
    frames: usize,
    cfg: &FourierConfig,
    rng: &mut R,
) -> Result<Vec<FourierBasis>> {
    cfg.validate()?;
    if frames == 0 {
        return Err(Error::argument("schedule length must be at least 1"));
    }
    let gammas: Vec<f64> = (0..cfg.num_bases).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = gammas.iter().sum();
    let bases = gammas
        .iter()
        .map(|g| {
            let frequency = cfg.freq_range.sample(rng);
            let amplitude = cfg.amp_range.sample(rng);
            let offset = if cfg.offsets_enabled {
                rng.random_range(0..frames)
            } else {
                0
            };
            FourierBasis::new(g / total, frequency, amplitude, offset)
        })
        .collect();
    Ok(bases)
}

/// Evaluates a schedule from explicit basis tuples.
///
/// Weights must be non-negative and sum to one within
/// [`WEIGHT_SUM_TOLERANCE`].
pub fn fourier_schedule(frames: usize, magnitude: f64, bases: &[FourierBasis]) -> Result<Schedule> {
    check_args(frames, magnitude)?;
    if bases.is_empty() {
        return Err(Error::config("at least one basis is required"));
    }
    for b in bases {
        b.validate(frames)?;
    }
    let weight_sum: f64 = bases.iter().map(|b| b.weight).sum();
    if (weight_sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::config(format!(
            "basis weights sum to {weight_sum}, expected 1"
        )));
    }

    let denom = phase_denominator(frames);
    let mut deviation = vec![0.0; frames];
    let mut raw = vec![0.0; frames];
    for b in bases {
        for (t, r) in raw.iter_mut().enumerate() {
            let k = (b.offset + 1 + t) as f64;
            *r = (2.0 * b.frequency * PI * k / denom).sin();
        }
        let dev = normalized_deviation(&raw, magnitude, b.amplitude);
        for (acc, d) in deviation.iter_mut().zip(dev) {
            *acc += b.weight * d;
        }
    }
    Ok(Schedule {
        values: deviation.into_iter().map(|d| magnitude + d).collect(),
        base_magnitude: magnitude,
        bases: bases.to_vec(),
    })
}

pub fn sample_fourier_schedule<R: Rng + ?Sized>(
    frames: usize,
    magnitude: f64,
    cfg: &FourierConfig,
    rng: &mut R,
) -> Result<Schedule> {
    check_args(frames, magnitude)?;
    let bases = sample_fourier_bases(frames, cfg, rng)?;
    fourier_schedule(frames, magnitude, &bases)
}

/// A straight ramp spanning `[M(1-A), M(1+A)]`, rotated left by `offset`
/// samples with wrap-around.
pub fn linear_schedule(
    frames: usize,
    magnitude: f64,
    amplitude: f64,
    ascending: bool,
    offset: usize,
) -> Result<Schedule> {
    check_args(frames, magnitude)?;
    if !(0.0..=1.0).contains(&amplitude) {
        return Err(Error::config(format!("amplitude {amplitude} outside [0, 1]")));
    }
    let half = magnitude * amplitude;
    let denom = phase_denominator(frames);
    let ramp: Vec<f64> = (0..frames)
        .map(|i| {
            if frames == 1 {
                return magnitude;
            }
            let pos = if ascending { i } else { frames - 1 - i };
            magnitude + half * (2.0 * pos as f64 / denom - 1.0)
        })
        .collect();
    let values = (0..frames).map(|t| ramp[(t + offset) % frames]).collect();
    Ok(Schedule {
        values,
        base_magnitude: magnitude,
        bases: Vec::new(),
    })
}

/// Independent uniform draw per frame in `[M(1-A), M(1+A)]`.
pub fn random_schedule<R: Rng + ?Sized>(
    frames: usize,
    magnitude: f64,
    amplitude: f64,
    rng: &mut R,
) -> Result<Schedule> {
    check_args(frames, magnitude)?;
    if !(0.0..=1.0).contains(&amplitude) {
        return Err(Error::config(format!("amplitude {amplitude} outside [0, 1]")));
    }
    let half = magnitude * amplitude;
    let values = (0..frames)
        .map(|_| {
            let u: f64 = rng.random();
            magnitude + half * (2.0 * u - 1.0)
        })
        .collect();
    Ok(Schedule {
        values,
        base_magnitude: magnitude,
        bases: Vec::new(),
    })
}

/// Normalized Gaussian taps for an odd-rounded `width`, sigma = width / 4.
fn gaussian_kernel(width: usize) -> Vec<f64> {
    let radius = width / 2;
    let sigma = (width as f64 / 4.0).max(0.25);
    let taps: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            (-0.5 * (d / sigma).powi(2)).exp()
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

/// Per-frame random values smoothed by a Gaussian kernel (truncated and
/// renormalized at the clip ends) and re-normalized into `[M(1-A), M(1+A)]`.
pub fn gaussian_smoothed_schedule<R: Rng + ?Sized>(
    frames: usize,
    magnitude: f64,
    amplitude: f64,
    kernel_width: usize,
    rng: &mut R,
) -> Result<Schedule> {
    check_args(frames, magnitude)?;
    if kernel_width == 0 {
        return Err(Error::config("gaussian kernel width must be positive"));
    }
    if !(0.0..=1.0).contains(&amplitude) {
        return Err(Error::config(format!("amplitude {amplitude} outside [0, 1]")));
    }
    let raw: Vec<f64> = (0..frames).map(|_| rng.random::<f64>()).collect();
    let kernel = gaussian_kernel(kernel_width);
    let radius = (kernel.len() / 2) as isize;
    let smoothed: Vec<f64> = (0..frames as isize)
        .map(|t| {
            let (mut acc, mut norm) = (0.0, 0.0);
            for (j, k) in kernel.iter().enumerate() {
                let idx = t + j as isize - radius;
                if (0..frames as isize).contains(&idx) {
                    acc += k * raw[idx as usize];
                    norm += k;
                }
            }
            acc / norm
        })
        .collect();
    let dev = normalized_deviation(&smoothed, magnitude, amplitude);
    Ok(Schedule {
        values: dev.into_iter().map(|d| magnitude + d).collect(),
        base_magnitude: magnitude,
        bases: Vec::new(),
    })
}

/// Draws a schedule of the requested family around base magnitude `magnitude`.
pub fn sample_schedule<R: Rng + ?Sized>(
    kind: &ScheduleKind,
    frames: usize,
    magnitude: f64,
    rng: &mut R,
) -> Result<Schedule> {
    kind.validate()?;
    check_args(frames, magnitude)?;
    match *kind {
        ScheduleKind::Static => Schedule::constant(frames, magnitude),
        ScheduleKind::Fourier(cfg) => sample_fourier_schedule(frames, magnitude, &cfg, rng),
        ScheduleKind::Sinusoidal {
            with_offset,
            amp_range,
        } => {
            let cfg = FourierConfig {
                num_bases: 1,
                freq_range: Interval::point(1.0),
                amp_range,
                offsets_enabled: with_offset,
            };
            sample_fourier_schedule(frames, magnitude, &cfg, rng)
        }
        ScheduleKind::Linear {
            with_offset,
            amp_range,
        } => {
            let amplitude = amp_range.sample(rng);
            let ascending = rng.random::<bool>();
            let offset = if with_offset {
                rng.random_range(0..frames)
            } else {
                0
            };
            linear_schedule(frames, magnitude, amplitude, ascending, offset)
        }
        ScheduleKind::RandomPerFrame { amp_range } => {
            let amplitude = amp_range.sample(rng);
            random_schedule(frames, magnitude, amplitude, rng)
        }
        ScheduleKind::RandomGaussianSmoothed {
            kernel_width,
            amp_range,
        } => {
            let amplitude = amp_range.sample(rng);
            gaussian_smoothed_schedule(frames, magnitude, amplitude, kernel_width, rng)
        }
    }
}

/// `count` independent draws from one ChaCha8 stream seeded with `seed`.
pub fn sample_schedules(
    kind: &ScheduleKind,
    frames: usize,
    magnitude: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<Schedule>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| sample_schedule(kind, frames, magnitude, &mut rng))
        .collect()
}
