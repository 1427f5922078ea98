//! Artifact writers.
//!
//! All writers are deterministic: the same data produces the same bytes.
//! Floats in the CSVs are printed with `{:.16e}` — 17 significant digits,
//! enough to reconstruct each `f64` exactly — and rows end in `\n`.

use crate::config::ExperimentConfig;
use phasewalk_core::{Distribution, RevivalReport};
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

/// Per-run digest embedded in `summary.json`.
///
/// `max_excursion` duplicates `max_std_dev`: the largest standard deviation
/// reached is the walk's excursion bound, and both names are kept so the
/// summary reads naturally next to either the time series or the trajectory
/// observables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub seed: u64,
    /// Trajectories actually evolved: the ensemble size, or 1 for an exact walk.
    pub runs: usize,
    pub n_steps: usize,
    pub revivals: RevivalReport,
    pub max_std_dev: f64,
    pub max_excursion: f64,
    /// Minimum of the return probability over the detector's stride grid
    /// (even steps for the standard protocol), ignoring step 0. `None` when
    /// the series has no such steps.
    pub min_return_probability: Option<f64>,
    pub final_return_probability: f64,
}

/// Time series CSV: `step,return_probability,mean_position,std_dev`, one
/// row per step from 0 to `n_steps`.
pub fn write_series_csv(
    w: &mut impl Write,
    return_probability: &[f64],
    mean_position: &[f64],
    std_dev: &[f64],
) -> io::Result<()> {
    debug_assert_eq!(return_probability.len(), mean_position.len());
    debug_assert_eq!(return_probability.len(), std_dev.len());
    writeln!(w, "step,return_probability,mean_position,std_dev")?;
    for (step, ((p, m), s)) in return_probability
        .iter()
        .zip(mean_position)
        .zip(std_dev)
        .enumerate()
    {
        writeln!(w, "{step},{p:.16e},{m:.16e},{s:.16e}")?;
    }
    Ok(())
}

/// Probability table CSV: one row per step, one column per site in
/// `[-n_steps, n_steps]` (probability outside that light cone is zero).
pub fn write_heatmap_csv(
    w: &mut impl Write,
    distributions: &[Distribution],
    n_steps: usize,
) -> io::Result<()> {
    let span = n_steps as i64;
    write!(w, "step")?;
    for x in -span..=span {
        write!(w, ",{x}")?;
    }
    writeln!(w)?;
    for (step, dist) in distributions.iter().enumerate() {
        write!(w, "{step}")?;
        for x in -span..=span {
            write!(w, ",{:.16e}", dist.probability(x))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Binary 8-bit PGM preview of the probability table; row `y` is step `y`,
/// column `x` is site `x - n_steps`. Each row is scaled by its own maximum
/// so late, spread-out steps stay visible next to the sharp early ones.
pub fn write_heatmap_pgm(
    w: &mut impl Write,
    distributions: &[Distribution],
    n_steps: usize,
) -> io::Result<()> {
    let span = n_steps as i64;
    let width = 2 * n_steps + 1;
    write!(w, "P5\n{width} {}\n255\n", distributions.len())?;
    let mut row = Vec::with_capacity(width);
    for dist in distributions {
        row.clear();
        let mut row_max = 0.0f64;
        for x in -span..=span {
            let p = dist.probability(x);
            row_max = row_max.max(p);
            row.push(p);
        }
        let scale = if row_max > 0.0 { 255.0 / row_max } else { 0.0 };
        for p in &row {
            w.write_all(&[(p * scale).round() as u8])?;
        }
    }
    Ok(())
}

/// Pretty-printed JSON summary, newline-terminated.
pub fn write_summary(w: &mut impl Write, summary: &Summary) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, summary).map_err(io::Error::from)?;
    writeln!(w)
}
