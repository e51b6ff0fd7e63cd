//! Schedule statistics and augmentation quality ratios.
//!
//! [`regime_stats`] measures a schedule family directly: mean total
//! variation (smoothness, lower is smoother) and mean pairwise normalized
//! L2 distance between draws (diversity). [`affinity`] and [`diversity`]
//! are the accuracy and training-loss ratios computed from measurements
//! taken elsewhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfmt;
use crate::signal::{self, ScheduleKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeStats {
    pub regime: String,
    pub frames: usize,
    pub magnitude: f64,
    pub samples: usize,
    pub mean_total_variation: f64,
    /// Standard error of `mean_total_variation`.
    pub tv_std_error: f64,
    /// Mean over all pairs of `||a - b|| / sqrt(T)`.
    pub mean_pairwise_distance: f64,
    /// Standard error of the pair distance, estimated from the
    /// `samples / 2` disjoint pairs `(0, 1), (2, 3), ..`, which are independent.
    pub pairwise_std_error: f64,
}

pub const REGIME_CSV_HEADER: &str = "regime,T,M,n,mean_tv,mean_pairwise";

impl RegimeStats {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.regime,
            self.frames,
            numfmt::significant(self.magnitude, 9),
            self.samples,
            numfmt::significant(self.mean_total_variation, 9),
            numfmt::significant(self.mean_pairwise_distance, 9),
        )
    }
}

fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn normalized_distance(a: &[f64], b: &[f64]) -> f64 {
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (sq / a.len() as f64).sqrt()
}

/// Draws `samples` schedules of `kind` and summarizes them.
pub fn regime_stats(
    kind: &ScheduleKind,
    frames: usize,
    magnitude: f64,
    samples: usize,
    seed: u64,
) -> Result<RegimeStats> {
    if samples < 2 {
        return Err(Error::argument(format!(
            "need at least 2 samples for pairwise statistics, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..samples)
        .map(|_| signal::sample_schedule(kind, frames, magnitude, &mut rng))
        .collect::<Result<Vec<_>>>()?;

    let tvs: Vec<f64> = draws.iter().map(|s| s.total_variation()).collect();
    let (mean_tv, tv_se) = mean_and_std_error(&tvs);

    let mut total = 0.0;
    for i in 0..samples {
        for j in i + 1..samples {
            total += normalized_distance(draws[i].values(), draws[j].values());
        }
    }
    let pairs = (samples * (samples - 1) / 2) as f64;

    let disjoint: Vec<f64> = draws
        .chunks_exact(2)
        .map(|p| normalized_distance(p[0].values(), p[1].values()))
        .collect();
    let (_, pair_se) = mean_and_std_error(&disjoint);

    Ok(RegimeStats {
        regime: kind.name().to_string(),
        frames,
        magnitude,
        samples,
        mean_total_variation: mean_tv,
        tv_std_error: tv_se,
        mean_pairwise_distance: total / pairs,
        pairwise_std_error: pair_se,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinityInput {
    pub accuracy_on_augmented_val: f64,
    pub accuracy_on_clean_val: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityInput {
    pub final_train_loss_augmented: f64,
    pub final_train_loss_clean: f64,
}

fn ratio(num: f64, den: f64, what: &str) -> Result<f64> {
    if !(den > 0.0 && den.is_finite()) {
        return Err(Error::argument(format!("{what}: denominator must be > 0, got {den}")));
    }
    if !num.is_finite() || num < 0.0 {
        return Err(Error::argument(format!("{what}: numerator must be >= 0, got {num}")));
    }
    Ok(num / den)
}

/// Accuracy on augmented validation data relative to clean validation data.
pub fn affinity(inp: &AffinityInput) -> Result<f64> {
    ratio(inp.accuracy_on_augmented_val, inp.accuracy_on_clean_val, "affinity")
}

/// Final training loss with augmentation relative to training on clean data.
pub fn diversity(inp: &DiversityInput) -> Result<f64> {
    ratio(inp.final_train_loss_augmented, inp.final_train_loss_clean, "diversity")
}

/// One configuration's measurements, as read from a fixture file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationMeasurement {
    pub config: String,
    #[serde(flatten)]
    pub affinity: AffinityInput,
    #[serde(flatten)]
    pub diversity: DiversityInput,
}

pub const AFFINITY_CSV_HEADER: &str = "config,affinity,diversity";

/// Renders `config,affinity,diversity` rows with two decimals.
pub fn render_affinity_table(rows: &[AugmentationMeasurement]) -> Result<String> {
    let mut out = format!("{AFFINITY_CSV_HEADER}\n");
    for row in rows {
        let a = affinity(&row.affinity)?;
        let d = diversity(&row.diversity)?;
        out.push_str(&format!("{},{a:.2},{d:.2}\n", row.config));
    }
    Ok(out)
}
