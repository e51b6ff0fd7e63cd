
use anyhow::Context;
use dynaug::metrics::{self, AugmentationMeasurement, REGIME_CSV_HEADER};
use dynaug::signal::ScheduleKind;
use serde_json::json;

use crate::args::{self, usage, KindArg, ReportArgs};
use crate::Console;

fn kind_of(k: KindArg) -> ScheduleKind {
    match k {
        KindArg::Static => ScheduleKind::Static,
        KindArg::Fourier => ScheduleKind::default(),
        KindArg::Linear => ScheduleKind::linear(),
        KindArg::Sine => ScheduleKind::sinusoidal(),
        KindArg::Random => ScheduleKind::random_per_frame(),
        KindArg::RandomGauss => ScheduleKind::random_gaussian(),
    }
}

pub fn run(a: &ReportArgs, con: &mut Console) -> anyhow::Result<u8> {
    if a.samples < 2 {
        return Err(usage(format!("--samples must be at least 2, got {}", a.samples)));
    }
    if a.kinds.is_empty() {
        return Err(usage("--kinds is empty"));
    }
    let kinds: Vec<ScheduleKind> = a.kinds.iter().map(|&k| kind_of(k)).collect();
    args::print_config(
        con,
        "report",
        &json!({
            "kinds": kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
            "frames": a.frames,
            "m": a.m,
            "samples": a.samples,
            "affinity": a.affinity,
        }),
        Some(a.seed),
    )?;

    let mut out = format!("{REGIME_CSV_HEADER}\n");
    for k in &kinds {
        let stats = metrics::regime_stats(k, a.frames, a.m, a.samples, a.seed)
            .map_err(|e| usage(e.to_string()))?;
        out.push_str(&stats.csv_row());
        out.push('\n');
    }
    if let Some(path) = &a.affinity {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let rows: Vec<AugmentationMeasurement> =
            serde_json::from_str(&text).with_context(|| format!("bad measurement fixture {}", path.display()))?;
        out.push('\n');
        out.push_str(&metrics::render_affinity_table(&rows)?);
    }
    con.out.write_all(out.as_bytes())?;
    Ok(0)
}
