//! Experiment configuration.
//!
//! A run is described by an [`ExperimentConfig`]. Settings accumulate in
//! layers — built-in defaults, then a preset, then a config file, then
//! command-line flags — with later layers overriding earlier ones. Each
//! layer fills a [`PartialConfig`]; [`PartialConfig::finalize`] plugs the
//! remaining holes with defaults and validates the result.

use anyhow::{anyhow, bail, Context, Result};
use phasewalk_core::{DetectionParams, NoiseSpec, PhaseFactor, ProtocolKind, WalkerState};
use serde::{Deserialize, Serialize};

/// Step count used when nothing else sets one.
pub const DEFAULT_STEPS: usize = 200;
/// Master seed used when nothing else sets one.
pub const DEFAULT_SEED: u64 = 42;

/// Which spinor the walker starts in. Both options place the walker on the
/// origin site; they differ only in the internal state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// `(|up> + i |down>)/sqrt(2)` — spreads left/right symmetrically.
    #[value(name = "symmetric")]
    Symmetric,
    /// Bare `|up>` — spreads asymmetrically.
    #[value(name = "up")]
    SpinUp,
}

impl InitialState {
    /// Build the concrete state on a window of the given radius.
    pub fn state(self, radius: usize) -> WalkerState {
        match self {
            InitialState::Symmetric => WalkerState::symmetric(radius),
            InitialState::SpinUp => WalkerState::spin_up(radius),
        }
    }
}

/// A fully resolved experiment: every knob pinned, ready to run.
///
/// The JSON summary embeds this struct verbatim; parsing that echo back
/// yields an equal config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub phase: PhaseFactor,
    pub initial: InitialState,
    pub n_steps: usize,
    /// Strength of the random per-step phase kick; `0` runs the exact walk.
    pub noise_eps: f64,
    /// Ensemble size when `noise_eps > 0`; ignored for exact walks.
    pub runs: usize,
    pub seed: u64,
    /// Write the per-step probability table plus a grayscale preview.
    pub heatmap: bool,
    /// Write the per-step probability table (CSV only).
    pub record_distributions: bool,
    pub detection: DetectionParams,
}

impl ExperimentConfig {
    /// Whether this run averages a noisy ensemble rather than evolving a
    /// single exact trajectory.
    pub fn is_ensemble(&self) -> bool {
        self.noise_eps > 0.0
    }
}

/// A config in the making: every field optional so a layer can set only
/// what it mentions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartialConfig {
    pub protocol: Option<ProtocolKind>,
    pub phase: Option<PhaseFactor>,
    pub initial: Option<InitialState>,
    pub n_steps: Option<usize>,
    pub noise_eps: Option<f64>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub heatmap: Option<bool>,
    pub record_distributions: Option<bool>,
    pub stride: Option<usize>,
    pub complete_tol: Option<f64>,
    pub partial_threshold: Option<f64>,
    pub min_separation: Option<usize>,
    pub tie_tol: Option<f64>,
}

impl PartialConfig {
    /// Overlay `upper` on `self`: any field `upper` sets wins.
    pub fn overlaid(mut self, upper: PartialConfig) -> PartialConfig {
        macro_rules! take {
            ($($field:ident),* $(,)?) => {
                $(if upper.$field.is_some() { self.$field = upper.$field; })*
            };
        }
        take!(
            protocol,
            phase,
            initial,
            n_steps,
            noise_eps,
            runs,
            seed,
            heatmap,
            record_distributions,
            stride,
            complete_tol,
            partial_threshold,
            min_separation,
            tie_tol,
        );
        self
    }

    /// Fill remaining holes with defaults and validate the whole.
    ///
    /// A phase is the one setting with no default; everything else falls
    /// back to: standard protocol, symmetric start, 200 steps, no noise,
    /// 20 runs, seed 42, no distribution output. The detector's stride
    /// defaults to 2 for the standard protocol — odd steps there carry
    /// exactly zero return probability — and 1 for split-step.
    pub fn finalize(self) -> Result<ExperimentConfig> {
        let protocol = self.protocol.unwrap_or(ProtocolKind::Standard);
        let phase = self.phase.ok_or_else(|| {
            anyhow!("no phase set: pass --phase-ratio P/Q, --phase <radians|golden>, a preset, or a config file")
        })?;
        let noise_eps = self.noise_eps.unwrap_or(0.0);
        if !(0.0..=1.0).contains(&noise_eps) {
            bail!("noise_eps must lie in [0, 1], got {noise_eps}");
        }
        let runs = self.runs.unwrap_or(NoiseSpec::DEFAULT_RUNS);
        if runs == 0 {
            bail!("runs must be at least 1");
        }
        let defaults = DetectionParams::default();
        let detection = DetectionParams {
            complete_tol: self.complete_tol.unwrap_or(defaults.complete_tol),
            partial_threshold: self
                .partial_threshold
                .unwrap_or(defaults.partial_threshold),
            min_separation: self.min_separation.unwrap_or(defaults.min_separation),
            stride: self.stride.unwrap_or(match protocol {
                ProtocolKind::Standard => 2,
                ProtocolKind::SplitStep => 1,
            }),
            tie_tol: self.tie_tol.unwrap_or(defaults.tie_tol),
        };
        detection
            .validate()
            .map_err(|e| anyhow!("invalid detection settings: {e}"))?;
        Ok(ExperimentConfig {
            protocol,
            phase,
            initial: self.initial.unwrap_or(InitialState::Symmetric),
            n_steps: self.n_steps.unwrap_or(DEFAULT_STEPS),
            noise_eps,
            runs,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            heatmap: self.heatmap.unwrap_or(false),
            record_distributions: self.record_distributions.unwrap_or(false),
            detection,
        })
    }
}

/// Parse a winding ratio `p/q`. The ratio is reduced to lowest terms; when
/// that changes the numbers, the second return value carries a warning for
/// the caller to surface.
pub fn parse_ratio(text: &str) -> Result<(PhaseFactor, Option<String>)> {
    let (p_text, q_text) = text
        .split_once('/')
        .ok_or_else(|| anyhow!("malformed phase ratio {text:?}: expected the form P/Q, e.g. 1/49"))?;
    let p: i64 = p_text
        .trim()
        .parse()
        .with_context(|| format!("malformed phase ratio {text:?}: bad numerator {p_text:?}"))?;
    let q: i64 = q_text
        .trim()
        .parse()
        .with_context(|| format!("malformed phase ratio {text:?}: bad denominator {q_text:?}"))?;
    let (phase, was_reduced) =
        PhaseFactor::rational_reduced(p, q).map_err(|e| anyhow!("invalid phase ratio {text:?}: {e}"))?;
    let warning = was_reduced.then(|| {
        let PhaseFactor::Rational { p: rp, q: rq } = phase else {
            unreachable!("rational_reduced returns a rational")
        };
        format!("phase ratio {p}/{q} is not in lowest terms; using {rp}/{rq}")
    });
    Ok((phase, warning))
}

/// Parse a `--phase` value: the literal angle in radians, or `golden` for
/// `2 pi (sqrt(5) - 1) / 2`.
pub fn parse_phase(text: &str) -> Result<PhaseFactor> {
    if text.trim().eq_ignore_ascii_case("golden") {
        return Ok(PhaseFactor::Golden);
    }
    let radians: f64 = text
        .trim()
        .parse()
        .map_err(|_| anyhow!("invalid phase {text:?}: expected an angle in radians or \"golden\""))?;
    if !radians.is_finite() {
        bail!("phase must be finite, got {radians}");
    }
    Ok(PhaseFactor::Radians(radians))
}

/// Parse the flat `key = value` config file format.
///
/// Grammar: one `key = value` pair per line; blank lines and lines starting
/// with `#` are ignored; whitespace around keys and values is trimmed.
/// Recognized keys and their values:
///
/// | key                 | value                  | matching flag   |
/// |---------------------|------------------------|-----------------|
/// | `protocol`          | `standard`/`splitstep` | `--protocol`    |
/// | `phase_ratio`       | `p/q`                  | `--phase-ratio` |
/// | `phase`             | radians or `golden`    | `--phase`       |
/// | `initial`           | `symmetric`/`up`       | `--initial`     |
/// | `steps`             | integer >= 0           | `--steps`       |
/// | `noise_eps`         | number in [0, 1]       | `--noise-eps`   |
/// | `runs`              | integer >= 1           | `--runs`        |
/// | `seed`              | unsigned integer       | `--seed`        |
/// | `heatmap`           | `true`/`false`         | `--heatmap`     |
/// | `record_dist`       | `true`/`false`         | `--record-dist` |
/// | `complete_tol`      | number in [0, 1)       | file only       |
/// | `partial_threshold` | number in (0, 1]       | file only       |
/// | `min_separation`    | integer >= 1           | file only       |
/// | `stride`            | integer >= 1           | file only       |
/// | `tie_tol`           | number >= 0            | file only       |
///
/// `phase_ratio` and `phase` are mutually exclusive within one file.
/// Returns the parsed layer plus any warnings (currently only ratio
/// reduction).
pub fn parse_config_text(text: &str) -> Result<(PartialConfig, Vec<String>)> {
    const KEYS: &str = "protocol, phase_ratio, phase, initial, steps, noise_eps, runs, seed, \
                        heatmap, record_dist, complete_tol, partial_threshold, min_separation, \
                        stride, tie_tol";
    let mut cfg = PartialConfig::default();
    let mut warnings = Vec::new();
    let mut phase_set_at: Option<(usize, &str)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`, got {line:?}"))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            bail!("line {line_no}: empty value for key {key:?}");
        }
        let claim_phase = |slot: &mut Option<(usize, &str)>, name| -> Result<()> {
            if let Some((prev_line, prev_key)) = slot {
                bail!(
                    "line {line_no}: {name} conflicts with {prev_key} on line {prev_line}; \
                     set the phase only once"
                );
            }
            *slot = Some((line_no, name));
            Ok(())
        };
        match key {
            "protocol" => {
                cfg.protocol = Some(match value {
                    "standard" => ProtocolKind::Standard,
                    "splitstep" => ProtocolKind::SplitStep,
                    other => bail!(
                        "line {line_no}: unknown protocol {other:?} (use standard or splitstep)"
                    ),
                })
            }
            "phase_ratio" => {
                claim_phase(&mut phase_set_at, "phase_ratio")?;
                let (phase, warning) =
                    parse_ratio(value).with_context(|| format!("line {line_no}"))?;
                warnings.extend(warning);
                cfg.phase = Some(phase);
            }
            "phase" => {
                claim_phase(&mut phase_set_at, "phase")?;
                cfg.phase = Some(parse_phase(value).with_context(|| format!("line {line_no}"))?);
            }
            "initial" => {
                cfg.initial = Some(match value {
                    "symmetric" => InitialState::Symmetric,
                    "up" => InitialState::SpinUp,
                    other => bail!(
                        "line {line_no}: unknown initial state {other:?} (use symmetric or up)"
                    ),
                })
            }
            "steps" => cfg.n_steps = Some(parse_num(value, line_no, key)?),
            "noise_eps" => cfg.noise_eps = Some(parse_num(value, line_no, key)?),
            "runs" => cfg.runs = Some(parse_num(value, line_no, key)?),
            "seed" => cfg.seed = Some(parse_num(value, line_no, key)?),
            "heatmap" => cfg.heatmap = Some(parse_bool(value, line_no, key)?),
            "record_dist" => cfg.record_distributions = Some(parse_bool(value, line_no, key)?),
            "complete_tol" => cfg.complete_tol = Some(parse_num(value, line_no, key)?),
            "partial_threshold" => cfg.partial_threshold = Some(parse_num(value, line_no, key)?),
            "min_separation" => cfg.min_separation = Some(parse_num(value, line_no, key)?),
            "stride" => cfg.stride = Some(parse_num(value, line_no, key)?),
            "tie_tol" => cfg.tie_tol = Some(parse_num(value, line_no, key)?),
            other => bail!("line {line_no}: unknown key {other:?} (known keys: {KEYS})"),
        }
    }
    Ok((cfg, warnings))
}

/// [`parse_config_text`] applied to a file on disk.
pub fn parse_config_file(path: &std::path::Path) -> Result<(PartialConfig, Vec<String>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    parse_config_text(&text).with_context(|| format!("in config file {}", path.display()))
}

fn parse_num<T: std::str::FromStr>(value: &str, line_no: usize, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("line {line_no}: bad value {value:?} for {key}: {e}"))
}

fn parse_bool(value: &str, line_no: usize, key: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => bail!("line {line_no}: bad value {other:?} for {key}: expected true or false"),
    }
}
