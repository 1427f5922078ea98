//! Runs one experiment end to end: simulate, detect revivals, write files.

use crate::config::ExperimentConfig;
use crate::output::{self, Summary};
use anyhow::{Context, Result};
use phasewalk_core::{
    detect_revivals, evolve, run_ensemble, strided_min, Distribution, NoiseSpec, ProtocolKind,
    ProtocolSpec,
};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// What a run produced, for callers that report back to the user.
pub struct RunOutput {
    pub summary: Summary,
    /// Files written, in the order they were written.
    pub files: Vec<PathBuf>,
    /// Conditions worth surfacing that did not stop the run.
    pub warnings: Vec<String>,
}

/// Simulate `config` and write its artifacts into `out_dir` (created if
/// missing): `series.csv` and `summary.json` always, `heatmap.csv` when
/// distributions are recorded, `heatmap.pgm` when the preview is on.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput> {
    // One guard site beyond the light cone keeps the window error-free.
    let radius = config.n_steps + 1;
    let initial = config.initial.state(radius);
    let spec = match config.protocol {
        ProtocolKind::Standard => ProtocolSpec::standard(config.phase),
        ProtocolKind::SplitStep => ProtocolSpec::split_step(config.phase),
    };

    let mut warnings = Vec::new();
    let want_distributions = config.heatmap || config.record_distributions;
    let (return_probability, mean_position, std_dev, distributions) = if config.is_ensemble() {
        if want_distributions {
            warnings.push(
                "probability tables are per-trajectory; skipping heatmap output for the noisy ensemble"
                    .to_owned(),
            );
        }
        let noise = NoiseSpec::new(config.noise_eps, config.runs, config.seed)?;
        let ensemble = run_ensemble(&initial, &spec, &noise, config.n_steps)?;
        (
            ensemble.return_probability,
            ensemble.mean_position,
            ensemble.std_dev,
            None,
        )
    } else {
        let trajectory = evolve(&initial, &spec, config.n_steps, want_distributions, None)?;
        (
            trajectory.return_probability,
            trajectory.mean_position,
            trajectory.std_dev,
            trajectory.distributions,
        )
    };

    let revivals = detect_revivals(&return_probability, &config.detection)?;
    let max_std_dev = std_dev.iter().copied().fold(0.0, f64::max);
    let summary = Summary {
        config: config.clone(),
        seed: config.seed,
        runs: if config.is_ensemble() { config.runs } else { 1 },
        n_steps: config.n_steps,
        revivals,
        max_std_dev,
        max_excursion: max_std_dev,
        min_return_probability: strided_min(&return_probability, config.detection.stride),
        final_return_probability: *return_probability
            .last()
            .expect("series always has a step-0 row"),
    };

    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let mut files = Vec::new();
    write_file(out_dir, "series.csv", &mut files, |w| {
        output::write_series_csv(w, &return_probability, &mean_position, &std_dev)
    })?;
    if let Some(dists) = &distributions {
        write_heatmaps(config, dists, out_dir, &mut files)?;
    }
    write_file(out_dir, "summary.json", &mut files, |w| {
        output::write_summary(w, &summary)
    })?;

    Ok(RunOutput {
        summary,
        files,
        warnings,
    })
}

fn write_heatmaps(
    config: &ExperimentConfig,
    dists: &[Distribution],
    out_dir: &Path,
    files: &mut Vec<PathBuf>,
) -> Result<()> {
    write_file(out_dir, "heatmap.csv", files, |w| {
        output::write_heatmap_csv(w, dists, config.n_steps)
    })?;
    if config.heatmap {
        write_file(out_dir, "heatmap.pgm", files, |w| {
            output::write_heatmap_pgm(w, dists, config.n_steps)
        })?;
    }
    Ok(())
}

fn write_file(
    out_dir: &Path,
    name: &str,
    files: &mut Vec<PathBuf>,
    write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let path = out_dir.join(name);
    let mut writer = BufWriter::new(
        File::create(&path).with_context(|| format!("cannot create {}", path.display()))?,
    );
    write(&mut writer).with_context(|| format!("cannot write {}", path.display()))?;
    writer
        .flush()
        .with_context(|| format!("cannot flush {}", path.display()))?;
    files.push(path);
    Ok(())
}
