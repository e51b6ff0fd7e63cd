use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use clap::ArgMatches;
use dynaug::signal::{self, FourierBasis, Schedule};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{self, given, usage, Format, KindArg, ScheduleArgs};
use crate::Console;

#[derive(Deserialize)]
struct ForcedBases {
    bases: Vec<FourierBasis>,
}

#[derive(Serialize)]
struct Sample<'a> {
    sample_id: usize,
    values: &'a [f64],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    bases: &'a [FourierBasis],
}

fn read_forced(path: &Path) -> anyhow::Result<Vec<FourierBasis>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let forced: ForcedBases =
        serde_json::from_str(&text).with_context(|| format!("bad basis config {}", path.display()))?;
    Ok(forced.bases)
}

pub fn run(a: &ScheduleArgs, m: &ArgMatches, con: &mut Console) -> anyhow::Result<u8> {
    if a.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let schedules: Vec<Schedule> = match &a.config {
        Some(path) => {
            if a.kind != KindArg::Fourier {
                return Err(usage("--config supplies Fourier bases; use --kind fourier"));
            }
            if let Some(flag) = ["bases", "freq", "amp", "count"].iter().find(|f| given(m, f)) {
                return Err(usage(format!("--{flag} conflicts with --config")));
            }
            let bases = read_forced(path)?;
            args::print_config(
        con,
                "schedule",
                &json!({"frames": a.frames, "m": a.m, "kind": "fourier", "bases": bases}),
                None,
            )?;
            vec![signal::fourier_schedule(a.frames, a.m, &bases).map_err(|e| usage(e.to_string()))?]
        }
        None => {
            let kind = args::schedule_kind(a.kind, &a.shape, m)?;
            args::print_config(
        con,
                "schedule",
                &json!({"frames": a.frames, "m": a.m, "kind": kind, "count": a.count}),
                Some(a.seed),
            )?;
            signal::sample_schedules(&kind, a.frames, a.m, a.count, a.seed)
                .map_err(|e| usage(e.to_string()))?
        }
    };

    let out = match a.format {
        Format::Csv => {
            let mut s = String::from("sample_id,frame,magnitude\n");
            for (i, sch) in schedules.iter().enumerate() {
                for (t, v) in sch.values().iter().enumerate() {
                    writeln!(s, "{i},{t},{v}")?;
                }
            }
            s
        }
        Format::Json => {
            let samples: Vec<Sample> = schedules
                .iter()
                .enumerate()
                .map(|(i, s)| Sample {
                    sample_id: i,
                    values: s.values(),
                    bases: s.bases(),
                })
                .collect();
            serde_json::to_string_pretty(&samples)? + "\n"
        }
    };
    con.out.write_all(out.as_bytes())?;
    Ok(0)
}
