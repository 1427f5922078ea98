//! `phasewalk` — simulate a discrete-time walk on the line whose shift
//! imprints a step- and spin-dependent phase, and export the results.
//!
//! ```text
//! phasewalk --preset fig1c --out results/fig1c
//! phasewalk --phase-ratio 1/100 --steps 300 --heatmap --out results/custom
//! phasewalk --phase golden --steps 1000 --noise-eps 0.05 --seed 7 --out results/noisy
//! ```

mod config;
mod output;
mod presets;
mod runner;

use anyhow::{anyhow, Result};
use clap::Parser;
use config::{InitialState, PartialConfig};
use phasewalk_core::ProtocolKind;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum ProtocolArg {
    /// Coin, then one phase-imprinting shift of both spin components.
    Standard,
    /// Two coins with a half-shift after each.
    Splitstep,
}

impl From<ProtocolArg> for ProtocolKind {
    fn from(arg: ProtocolArg) -> Self {
        match arg {
            ProtocolArg::Standard => ProtocolKind::Standard,
            ProtocolArg::Splitstep => ProtocolKind::SplitStep,
        }
    }
}

/// Walks a spin-1/2 particle on a 1D lattice, one coin-and-shift step at a
/// time, with the shift phase growing linearly in the step number. Writes a
/// per-step time series (CSV), optionally the full probability table
/// (CSV + PGM preview), and a JSON summary with detected revivals.
///
/// Settings layer in increasing precedence: defaults, --preset, --config
/// file, then flags.
#[derive(Parser, Debug)]
#[command(name = "phasewalk", version)]
struct Cli {
    /// Named parameter set to start from (see --list-presets).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Print the available preset names and exit.
    #[arg(long)]
    list_presets: bool,

    /// `key = value` config file layered on top of the preset.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Walk protocol.
    #[arg(long, value_enum)]
    protocol: Option<ProtocolArg>,

    /// Winding ratio P/Q: the shift at step n imprints the phase 2π·(P/Q)·n.
    #[arg(long, value_name = "P/Q", conflicts_with = "phase")]
    phase_ratio: Option<String>,

    /// Phase increment in radians, or "golden" for 2π(√5−1)/2.
    #[arg(long, value_name = "RAD|golden")]
    phase: Option<String>,

    /// Initial spinor at the origin.
    #[arg(long, value_enum)]
    initial: Option<InitialState>,

    /// Number of steps to evolve.
    #[arg(long, value_name = "N")]
    steps: Option<usize>,

    /// Random phase-kick strength in [0, 1]; values above 0 switch to a
    /// seeded ensemble average.
    #[arg(long, value_name = "EPS")]
    noise_eps: Option<f64>,

    /// Ensemble size for noisy runs.
    #[arg(long, value_name = "R")]
    runs: Option<usize>,

    /// Master seed for the noise streams.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,

    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Write the probability table and its grayscale preview.
    #[arg(long)]
    heatmap: bool,

    /// Write the probability table (CSV only, no preview).
    #[arg(long)]
    record_dist: bool,
}

/// Merge all configuration layers into the final experiment description.
fn assemble(cli: &Cli) -> Result<(config::ExperimentConfig, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut layered = PartialConfig::default();

    if let Some(name) = &cli.preset {
        let preset = presets::preset(name).ok_or_else(|| {
            anyhow!(
                "unknown preset {name:?}; available presets: {}",
                presets::PRESET_NAMES.join(", ")
            )
        })?;
        layered = layered.overlaid(preset);
    }

    if let Some(path) = &cli.config {
        let (file_layer, mut file_warnings) = config::parse_config_file(path)?;
        warnings.append(&mut file_warnings);
        layered = layered.overlaid(file_layer);
    }

    let mut flags = PartialConfig {
        protocol: cli.protocol.map(Into::into),
        initial: cli.initial,
        n_steps: cli.steps,
        noise_eps: cli.noise_eps,
        runs: cli.runs,
        seed: cli.seed,
        ..PartialConfig::default()
    };
    if let Some(text) = &cli.phase_ratio {
        let (phase, warning) = config::parse_ratio(text)?;
        warnings.extend(warning);
        flags.phase = Some(phase);
    }
    if let Some(text) = &cli.phase {
        flags.phase = Some(config::parse_phase(text)?);
    }
    // Absent boolean flags leave the lower layers alone rather than
    // overriding them with `false`.
    if cli.heatmap {
        flags.heatmap = Some(true);
    }
    if cli.record_dist {
        flags.record_distributions = Some(true);
    }

    let experiment = layered.overlaid(flags).finalize()?;
    Ok((experiment, warnings))
}

fn run(cli: &Cli) -> Result<()> {
    let (experiment, warnings) = assemble(cli)?;
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    let outcome = runner::run_experiment(&experiment, &cli.out)?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    let summary = &outcome.summary;
    let period = match summary.revivals.inferred_period {
        Some(p) => format!(", period {p}"),
        None => String::new(),
    };
    println!(
        "{} step(s), {} run(s): {} revival event(s){period}, max sigma {:.4}",
        summary.n_steps,
        summary.runs,
        summary.revivals.events.len(),
        summary.max_std_dev,
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_presets {
        for name in presets::PRESET_NAMES {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
