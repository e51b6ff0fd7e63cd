use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use clap::ArgMatches;
use dynaug::io;
use dynaug::ops::{self, OpKind};
use dynaug::pipeline::{derive_seed, run_pool};
use dynaug::policy::{sample_policy, ClipShape, Policy};
use dynaug::{Clip, Frame};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::args::{self, usage, BenchArgs, SyntheticSpec};
use crate::clips;
use crate::Console;

#[derive(Debug, Serialize)]
struct BenchReport {
    clips: usize,
    frames: usize,
    workers: usize,
    elapsed_s: f64,
    clips_per_s: f64,
    frames_per_s: f64,
    /// SHA-256 over every output frame, in input order.
    digest: String,
    op_time_share: BTreeMap<String, f64>,
}

fn synthetic(spec: SyntheticSpec) -> Vec<Clip> {
    (0..spec.count)
        .map(|i| {
            let frames = (0..spec.frames)
                .map(|t| {
                    Frame::from_fn(spec.width, spec.height, |x, y| {
                        let v = (x + 2 * y) as usize + 3 * t + 17 * i;
                        [(v % 256) as u8, ((v / 2 + y as usize) % 256) as u8, ((x as usize * 5 + i) % 256) as u8]
                    })
                    .expect("positive dimensions")
                })
                .collect();
            Clip::new(format!("synthetic_{i:04}"), frames).expect("uniform frames")
        })
        .collect()
}

/// Augments one clip, timing each applied op.
fn timed_augment(clip: &Clip, policy: &Policy, seed: u64) -> dynaug::Result<(Clip, Vec<(OpKind, Duration)>)> {
    let ap = sample_policy(policy, ClipShape::of(clip), seed)?;
    let wide = ap.space.is_wide();
    let mut current = clip.clone();
    let mut times = Vec::new();
    for step in ap.steps.iter().filter(|s| s.applied) {
        let start = Instant::now();
        current = ops::apply_scheduled(step.op, &current, &step.schedule, step.direction, wide, step.region.as_ref())?;
        times.push((step.op, start.elapsed()));
    }
    Ok((current, times))
}

pub fn run(a: &BenchArgs, m: &ArgMatches, con: &mut Console) -> anyhow::Result<u8> {
    let policy = args::policy(&a.policy, m)?;
    let workers = args::workers(a.workers)?;
    args::print_config(
        con,
        "bench",
        &json!({
            "input": a.input,
            "synthetic": a.synthetic,
            "policy": policy,
            "workers": workers,
        }),
        Some(a.seed),
    )?;

    let mut failed = 0;
    let batch = match (&a.input, a.synthetic) {
        (_, Some(spec)) => synthetic(spec),
        (Some(dir), None) => {
            let entries = clips::discover(dir)?;
            let mut loaded = Vec::with_capacity(entries.len());
            for e in &entries {
                match io::read_clip(&e.locator) {
                    Ok(c) => loaded.push(c),
                    Err(err) => {
                        failed += 1;
                        writeln!(con.err, "clip {}: {err}", e.name)?;
                    }
                }
            }
            loaded
        }
        (None, None) => return Err(usage("one of --input or --synthetic is required")),
    };
    if batch.is_empty() {
        return Err(usage("no clips to benchmark"));
    }

    let start = Instant::now();
    let results = run_pool(&batch, workers, |c| timed_augment(c, &policy, derive_seed(a.seed, c.source_id())))?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut hasher = Sha256::new();
    let mut per_op: BTreeMap<String, Duration> = BTreeMap::new();
    let mut frames = 0;
    for (clip, r) in batch.iter().zip(&results) {
        match r {
            Ok((out, times)) => {
                frames += out.len();
                for f in out.frames() {
                    hasher.update(f.data());
                }
                for (op, d) in times {
                    *per_op.entry(format!("{op:?}")).or_default() += *d;
                }
            }
            Err(err) => {
                failed += 1;
                writeln!(con.err, "clip {}: {err}", clip.source_id())?;
            }
        }
    }
    let total_op: f64 = per_op.values().map(Duration::as_secs_f64).sum();
    let share = per_op
        .into_iter()
        .map(|(k, d)| (k, if total_op > 0.0 { d.as_secs_f64() / total_op } else { 0.0 }))
        .collect();
    let done = results.iter().filter(|r| r.is_ok()).count();
    let rate = |n: usize| if elapsed > 0.0 { n as f64 / elapsed } else { 0.0 };
    let report = BenchReport {
        clips: done,
        frames,
        workers,
        elapsed_s: elapsed,
        clips_per_s: rate(done),
        frames_per_s: rate(frames),
        digest: hasher.finalize().iter().map(|b| format!("{b:02x}")).collect(),
        op_time_share: share,
    };

    if a.json {
        writeln!(con.out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(con.out, "clips        {}", report.clips)?;
        writeln!(con.out, "frames       {}", report.frames)?;
        writeln!(con.out, "workers      {}", report.workers)?;
        writeln!(con.out, "elapsed_s    {:.4}", report.elapsed_s)?;
        writeln!(con.out, "clips/s      {:.2}", report.clips_per_s)?;
        writeln!(con.out, "frames/s     {:.2}", report.frames_per_s)?;
        writeln!(con.out, "digest       {}", report.digest)?;
        writeln!(con.out, "op time share:")?;
        for (op, s) in &report.op_time_share {
            writeln!(con.out, "  {op:<20} {:>6.1}%", s * 100.0)?;
        }
    }
    Ok(if failed > 0 { 2 } else { 0 })
}
