use std::fs;
use std::io::Write;

use anyhow::Context;
use clap::ArgMatches;
use dynaug::io;
use dynaug::pipeline::{augment_clip, derive_seed, run_pool};
use dynaug::policy::AppliedPolicy;
use serde::Serialize;
use serde_json::json;

use crate::args::{self, usage, AugmentArgs};
use crate::clips;
use crate::Console;

/// One policy-log line: the applied policy plus the clip it belongs to.
#[derive(Serialize)]
struct LogLine<'a> {
    clip: &'a str,
    #[serde(flatten)]
    policy: &'a AppliedPolicy,
}

pub fn run(a: &AugmentArgs, m: &ArgMatches, con: &mut Console) -> anyhow::Result<u8> {
    let policy = args::policy(&a.policy, m)?;
    let workers = args::workers(a.workers)?;
    args::print_config(
        con,
        "augment",
        &json!({
            "input": a.input,
            "output": a.output,
            "policy": policy,
            "workers": workers,
            "log_policies": a.log_policies,
        }),
        Some(a.seed),
    )?;

    let entries = clips::discover(&a.input)?;
    if entries.is_empty() {
        return Err(usage(format!("no clips found under {}", a.input.display())));
    }
    fs::create_dir_all(&a.output).with_context(|| format!("cannot create {}", a.output.display()))?;

    let results = run_pool(&entries, workers, |e| {
        let clip = io::read_clip(&e.locator)?;
        let (out, ap) = augment_clip(&clip, &policy, derive_seed(a.seed, clip.source_id()))?;
        io::write_clip(&out, &e.mirrored(&a.output))?;
        Ok(ap)
    })?;

    let mut log = String::new();
    let mut failed = 0;
    for (e, r) in entries.iter().zip(&results) {
        match r {
            Ok(ap) => {
                log.push_str(&serde_json::to_string(&LogLine { clip: &e.name, policy: ap })?);
                log.push('\n');
            }
            Err(err) => {
                failed += 1;
                writeln!(con.err, "clip {}: {err}", e.name)?;
            }
        }
    }
    if let Some(path) = &a.log_policies {
        fs::File::create(path)
            .and_then(|mut f| f.write_all(log.as_bytes()))
            .with_context(|| format!("cannot write policy log {}", path.display()))?;
    }
    writeln!(con.err, "augmented {}/{} clips", entries.len() - failed, entries.len())?;
    Ok(if failed > 0 { 2 } else { 0 })
}
