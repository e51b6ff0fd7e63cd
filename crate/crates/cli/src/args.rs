//! Flag definitions and their translation into library types.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, Parser, Subcommand, ValueEnum};
use dynaug::policy::{Family, Mode, Policy, SearchSpace};
use dynaug::signal::{FourierConfig, Interval, ScheduleKind, DEFAULT_GAUSSIAN_WIDTH};
use serde::Serialize;

use crate::Console;

#[derive(Debug, Parser)]
#[command(
    name = "dynaug",
    version,
    about = "Video augmentation with temporally varying magnitudes",
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Augment every clip under a directory into a mirrored output tree
    Augment(AugmentArgs),
    /// Print sampled magnitude schedules as CSV or JSON
    Schedule(ScheduleArgs),
    /// Smoothness and diversity statistics per schedule family
    Report(ReportArgs),
    /// Re-encode a video with H.264 at a given CRF (needs ffmpeg)
    Corrupt(CorruptArgs),
    /// Measure augmentation throughput
    Bench(BenchArgs),
}

/// A usage problem detected after parsing: exit code 1 plus a help hint.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum PolicyArg {
    /// RandAugment: N ops at magnitude M, each gated by p
    Ra,
    /// TrivialAugment: one op, magnitude uniform over 0..=30
    Ta,
    /// UniformAugment: N ops, p and M uniform per op
    Ua,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Static,
    Dynamic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Org,
    Mod,
    Wide,
    WideMod,
}

impl From<SpaceArg> for SearchSpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Org => SearchSpace::Org,
            SpaceArg::Mod => SearchSpace::Mod,
            SpaceArg::Wide => SearchSpace::Wide,
            SpaceArg::WideMod => SearchSpace::WideMod,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Static,
    Fourier,
    Linear,
    Sine,
    Random,
    RandomGauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Distribution flags shared by every command that samples schedules.
#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Number of Fourier bases
    #[arg(long, default_value_t = 3)]
    pub bases: usize,
    /// Fourier frequency range LO:HI
    #[arg(long, default_value = "0.2:1.5")]
    pub freq: Interval,
    /// Amplitude range LO:HI, a subset of [0, 1]
    #[arg(long, default_value = "0:1")]
    pub amp: Interval,
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    #[arg(long, value_enum, default_value_t = PolicyArg::Ra)]
    pub policy: PolicyArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Dynamic)]
    pub mode: ModeArg,
    /// Op search space
    #[arg(long, value_enum, default_value_t = SpaceArg::Org)]
    pub space: SpaceArg,
    /// Ops per clip (ra, ua)
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Magnitude on the 0..=30 scale (ra)
    #[arg(long, default_value_t = 9.0)]
    pub m: f64,
    /// Probability of applying each op (ra)
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Schedule family used in dynamic mode
    #[arg(long, value_enum, default_value_t = KindArg::Fourier)]
    pub schedule_kind: KindArg,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Directory of clips: frame_NNNNN.png subdirectories or .dvclip files
    #[arg(long)]
    pub input: PathBuf,
    /// Output root; the input layout is mirrored under it
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Master seed; per-clip seeds are derived from it and the clip name
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads [default: available cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write one JSON line per augmented clip with the applied policy
    #[arg(long)]
    pub log_policies: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Frames per schedule
    #[arg(long, default_value_t = 32)]
    pub frames: usize,
    /// Base magnitude
    #[arg(long, default_value_t = 9.0)]
    pub m: f64,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_enum, default_value_t = KindArg::Fourier)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of schedules to draw
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// JSON file {"bases": [{weight, frequency, amplitude, offset}, ..]};
    /// evaluates exactly these bases instead of sampling
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Comma-separated schedule kinds
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "static,linear,sine,random,random-gauss,fourier"
    )]
    pub kinds: Vec<KindArg>,
    #[arg(long, default_value_t = 32)]
    pub frames: usize,
    #[arg(long, default_value_t = 9.0)]
    pub m: f64,
    /// Schedules drawn per kind (at least 2)
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON list of {config, accuracy_on_augmented_val, accuracy_on_clean_val,
    /// final_train_loss_augmented, final_train_loss_clean}; rendered as an
    /// affinity/diversity table after the statistics
    #[arg(long)]
    pub affinity: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    /// Source video
    #[arg(long)]
    pub input: PathBuf,
    /// H.264 constant rate factor, 0..=51
    #[arg(long, allow_negative_numbers = true)]
    pub qp: i64,
    /// Destination video
    #[arg(long)]
    pub output: PathBuf,
}

/// `TxHxW,COUNT`: COUNT clips of T frames of H x W pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SyntheticSpec {
    pub frames: usize,
    pub height: u32,
    pub width: u32,
    pub count: usize,
}

impl FromStr for SyntheticSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected TxHxW,COUNT (e.g. 8x64x64,16), got {s:?}");
        let (dims, count) = s.split_once(',').ok_or_else(bad)?;
        let parts: Vec<&str> = dims.split(['x', 'X', '×']).collect();
        let [t, h, w] = parts[..] else {
            return Err(bad());
        };
        let num = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
        let spec = SyntheticSpec {
            frames: num(t)?,
            height: num(h)? as u32,
            width: num(w)? as u32,
            count: num(count)?,
        };
        if spec.frames == 0 || spec.height == 0 || spec.width == 0 || spec.count == 0 {
            return Err(format!("all of T, H, W and COUNT must be positive in {s:?}"));
        }
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of clips, as for augment
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    pub input: Option<PathBuf>,
    /// Generated batch instead of files, TxHxW,COUNT
    #[arg(long)]
    pub synthetic: Option<SyntheticSpec>,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Worker threads [default: available cores]
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the measurements as JSON
    #[arg(long)]
    pub json: bool,
}

pub fn given(m: &ArgMatches, id: &str) -> bool {
    m.value_source(id) == Some(ValueSource::CommandLine)
}

pub fn schedule_kind(kind: KindArg, shape: &ShapeArgs, m: &ArgMatches) -> anyhow::Result<ScheduleKind> {
    if kind != KindArg::Fourier {
        for flag in ["bases", "freq"] {
            if given(m, flag) {
                return Err(usage(format!("--{flag} only applies to the fourier schedule kind")));
            }
        }
    }
    if kind == KindArg::Static && given(m, "amp") {
        return Err(usage("--amp has no effect on the static schedule kind"));
    }
    let amp = shape.amp;
    let k = match kind {
        KindArg::Static => ScheduleKind::Static,
        KindArg::Fourier => ScheduleKind::Fourier(FourierConfig {
            num_bases: shape.bases,
            freq_range: shape.freq,
            amp_range: amp,
            offsets_enabled: true,
        }),
        KindArg::Linear => ScheduleKind::linear().with_amp_range(amp),
        KindArg::Sine => ScheduleKind::sinusoidal().with_amp_range(amp),
        KindArg::Random => ScheduleKind::random_per_frame().with_amp_range(amp),
        KindArg::RandomGauss => ScheduleKind::RandomGaussianSmoothed {
            kernel_width: DEFAULT_GAUSSIAN_WIDTH,
            amp_range: amp,
        },
    };
    k.validate().map_err(|e| usage(e.to_string()))?;
    Ok(k)
}

pub fn policy(a: &PolicyArgs, m: &ArgMatches) -> anyhow::Result<Policy> {
    let unused: &[&str] = match a.policy {
        PolicyArg::Ra => &[],
        PolicyArg::Ta => &["n", "m", "p"],
        PolicyArg::Ua => &["m", "p"],
    };
    if let Some(flag) = unused.iter().find(|f| given(m, f)) {
        return Err(usage(format!(
            "--{flag} does not apply to --policy {}",
            a.policy.to_possible_value().expect("no skipped variants").get_name()
        )));
    }
    let mode = match a.mode {
        ModeArg::Static => {
            if let Some(flag) = ["schedule_kind", "bases", "freq", "amp"].iter().find(|f| given(m, f)) {
                return Err(usage(format!(
                    "--{} only applies to --mode dynamic",
                    flag.replace('_', "-")
                )));
            }
            Mode::Static
        }
        ModeArg::Dynamic => Mode::Dynamic(schedule_kind(a.schedule_kind, &a.shape, m)?),
    };
    let family = match a.policy {
        PolicyArg::Ra => Family::RandAugment {
            n: a.n,
            magnitude: a.m,
            p: a.p,
        },
        PolicyArg::Ta => Family::TrivialAugment,
        PolicyArg::Ua => Family::UniformAugment { n: a.n },
    };
    let p = Policy {
        family,
        mode,
        space: a.space.into(),
    };
    p.validate().map_err(|e| usage(e.to_string()))?;
    Ok(p)
}

pub fn workers(requested: Option<usize>) -> anyhow::Result<usize> {
    match requested {
        Some(0) => Err(usage("--workers must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Writes the resolved configuration and master seed to the error stream.
pub fn print_config(
    con: &mut Console,
    command: &str,
    config: &impl Serialize,
    seed: Option<u64>,
) -> std::io::Result<()> {
    let json = serde_json::to_string(config).unwrap_or_else(|e| format!("<unserializable: {e}>"));
    writeln!(con.err, "dynaug {command}: config {json}")?;
    match seed {
        Some(s) => writeln!(con.err, "dynaug {command}: master seed {s}"),
        None => writeln!(con.err, "dynaug {command}: master seed n/a"),
    }
}
