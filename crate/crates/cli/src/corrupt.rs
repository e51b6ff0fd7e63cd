use std::ffi::OsString;
use std::io::ErrorKind;
use std::path::Path;
use std::process::{Command, Stdio};

use serde_json::json;

use crate::args::{self, usage, CorruptArgs};
use crate::Console;

pub const MAX_CRF: i64 = 51;

/// Arguments after the program name, in the exact order ffmpeg receives them.
pub fn ffmpeg_args(input: &Path, qp: i64, output: &Path) -> Vec<OsString> {
    let mut v: Vec<OsString> = vec!["-i".into(), input.into()];
    for s in ["-c:v", "libx264", "-preset", "slow", "-crf"] {
        v.push(s.into());
    }
    v.push(qp.to_string().into());
    v.push(output.into());
    v
}

pub fn run(a: &CorruptArgs, con: &mut Console) -> anyhow::Result<u8> {
    if !(0..=MAX_CRF).contains(&a.qp) {
        return Err(usage(format!("--qp must be in 0..={MAX_CRF}, got {}", a.qp)));
    }
    let argv = ffmpeg_args(&a.input, a.qp, &a.output);
    args::print_config(
        con,
        "corrupt",
        &json!({
            "input": a.input,
            "qp": a.qp,
            "output": a.output,
            "command": std::iter::once("ffmpeg".into())
                .chain(argv.iter().map(|s| s.to_string_lossy().into_owned()))
                .collect::<Vec<String>>(),
        }),
        None,
    )?;
    // stdin closed so an existing output makes ffmpeg fail instead of prompting
    let status = Command::new("ffmpeg").args(&argv).stdin(Stdio::null()).status();
    match status {
        Err(e) if e.kind() == ErrorKind::NotFound => {
            writeln!(con.err, 
                "error: ffmpeg not found on PATH. Install it (e.g. `apt install ffmpeg`, \
                 `brew install ffmpeg`, or https://ffmpeg.org/download.html) and retry."
            )?;
            Ok(3)
        }
        Err(e) => Err(anyhow::Error::new(e).context("cannot run ffmpeg")),
        Ok(s) => match s.code() {
            Some(0) => Ok(0),
            Some(c) => {
                writeln!(con.err, "ffmpeg exited with status {c}")?;
                Ok(u8::try_from(c).unwrap_or(1))
            }
            None => {
                writeln!(con.err, "ffmpeg was terminated by a signal")?;
                Ok(1)
            }
        },
    }
}
