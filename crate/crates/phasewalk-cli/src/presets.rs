//! Canned parameter sets.
//!
//! Every preset pins one panel of the demonstration experiments; anything a
//! preset leaves unset can still come from a config file or flags (most
//! usefully `--seed` for the noisy ensembles). The full table:
//!
//! | name        | protocol   | phase       | initial   | steps | noise             | output  |
//! |-------------|------------|-------------|-----------|-------|-------------------|---------|
//! | `fig1a`     | standard   | 1/200       | symmetric | 200   | —                 | heatmap |
//! | `fig1b`     | standard   | 1/100       | symmetric | 200   | —                 | heatmap |
//! | `fig1c`     | standard   | 1/49        | symmetric | 200   | —                 | heatmap |
//! | `fig1d`     | standard   | 1/200       | up        | 200   | —                 | heatmap |
//! | `fig1e`     | standard   | 1/100       | up        | 200   | —                 | heatmap |
//! | `fig1f`     | standard   | 1/49        | up        | 200   | —                 | heatmap |
//! | `fig1g`     | standard   | 1/200       | symmetric | 200   | —                 | series  |
//! | `fig1h`     | standard   | 1/100       | symmetric | 200   | —                 | series  |
//! | `fig1i`     | standard   | 1/49        | symmetric | 200   | —                 | series  |
//! | `fig2`      | standard   | golden      | symmetric | 1000  | —                 | series  |
//! | `fig3a`     | split-step | 1/100       | symmetric | 400   | —                 | heatmap |
//! | `fig3b`     | split-step | 1/100       | symmetric | 400   | —                 | series  |
//! | `fig3c`     | split-step | 1/49        | symmetric | 400   | —                 | heatmap |
//! | `fig3d`     | split-step | 1/49        | symmetric | 400   | —                 | series  |
//! | `fig4a`     | standard   | 1/49        | symmetric | 200   | eps 1/20, 20 runs | series  |
//! | `fig4b`     | standard   | 1/49        | symmetric | 200   | eps 1/5, 20 runs  | series  |
//! | `fig4c`     | standard   | 1/49        | symmetric | 200   | eps 1, 20 runs    | series  |
//! | `fig4d`     | standard   | golden      | symmetric | 1000  | eps 1/20, 20 runs | series  |
//! | `fig4e`     | standard   | golden      | symmetric | 1000  | eps 1/5, 20 runs  | series  |
//! | `fig4f`     | standard   | golden      | symmetric | 1000  | eps 1, 20 runs    | series  |
//!
//! "heatmap" presets record the full probability table and its grayscale
//! preview on top of the time series; "series" presets write the time
//! series alone. The winding ratios 1/200 and 1/100 revive completely with
//! periods 200 and 100; 1/49 alternates partial and complete revivals with
//! period 98; the golden winding never revives completely but stays
//! localized. The `fig4*` ladder shows revival signatures surviving weak
//! phase noise and dissolving into transport at full strength.

use crate::config::{InitialState, PartialConfig};
use phasewalk_core::{PhaseFactor, ProtocolKind};

/// Names accepted by [`preset`], in the order the table documents them.
pub const PRESET_NAMES: [&str; 20] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f", "fig1g", "fig1h", "fig1i", "fig2",
    "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f",
];

/// Look up a preset by name.
pub fn preset(name: &str) -> Option<PartialConfig> {
    let ratio = |p, q| PhaseFactor::rational(p, q).expect("preset ratios are coprime");
    let golden = PhaseFactor::Golden;
    let standard = |phase, initial, steps, heatmap| PartialConfig {
        protocol: Some(ProtocolKind::Standard),
        phase: Some(phase),
        initial: Some(initial),
        n_steps: Some(steps),
        heatmap: Some(heatmap),
        ..PartialConfig::default()
    };
    let split = |phase, steps, heatmap| PartialConfig {
        protocol: Some(ProtocolKind::SplitStep),
        phase: Some(phase),
        initial: Some(InitialState::Symmetric),
        n_steps: Some(steps),
        heatmap: Some(heatmap),
        ..PartialConfig::default()
    };
    let noisy = |base: PartialConfig, eps| PartialConfig {
        noise_eps: Some(eps),
        runs: Some(20),
        ..base
    };
    use InitialState::{SpinUp, Symmetric};
    Some(match name {
        "fig1a" => standard(ratio(1, 200), Symmetric, 200, true),
        "fig1b" => standard(ratio(1, 100), Symmetric, 200, true),
        "fig1c" => standard(ratio(1, 49), Symmetric, 200, true),
        "fig1d" => standard(ratio(1, 200), SpinUp, 200, true),
        "fig1e" => standard(ratio(1, 100), SpinUp, 200, true),
        "fig1f" => standard(ratio(1, 49), SpinUp, 200, true),
        "fig1g" => standard(ratio(1, 200), Symmetric, 200, false),
        "fig1h" => standard(ratio(1, 100), Symmetric, 200, false),
        "fig1i" => standard(ratio(1, 49), Symmetric, 200, false),
        "fig2" => standard(golden, Symmetric, 1000, false),
        "fig3a" => split(ratio(1, 100), 400, true),
        "fig3b" => split(ratio(1, 100), 400, false),
        "fig3c" => split(ratio(1, 49), 400, true),
        "fig3d" => split(ratio(1, 49), 400, false),
        "fig4a" => noisy(standard(ratio(1, 49), Symmetric, 200, false), 0.05),
        "fig4b" => noisy(standard(ratio(1, 49), Symmetric, 200, false), 0.2),
        "fig4c" => noisy(standard(ratio(1, 49), Symmetric, 200, false), 1.0),
        "fig4d" => noisy(standard(golden, Symmetric, 1000, false), 0.05),
        "fig4e" => noisy(standard(golden, Symmetric, 1000, false), 0.2),
        "fig4f" => noisy(standard(golden, Symmetric, 1000, false), 1.0),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves_and_finalizes() {
        for name in PRESET_NAMES {
            let partial = preset(name).unwrap_or_else(|| panic!("{name} missing"));
            let config = partial
                .finalize()
                .unwrap_or_else(|e| panic!("{name} does not finalize: {e}"));
            assert!(config.n_steps >= 200, "{name}");
        }
    }

    #[test]
    fn unknown_names_resolve_to_none() {
        for name in ["fig1j", "fig5a", "FIG1A", ""] {
            assert!(preset(name).is_none(), "{name:?}");
        }
    }

    #[test]
    fn table_spot_checks() {
        let a = preset("fig1a").unwrap().finalize().unwrap();
        assert_eq!(a.protocol, ProtocolKind::Standard);
        assert_eq!(a.phase, PhaseFactor::rational(1, 200).unwrap());
        assert_eq!(a.initial, InitialState::Symmetric);
        assert_eq!(a.n_steps, 200);
        assert!(a.heatmap);
        assert!(!a.is_ensemble());

        let d = preset("fig1d").unwrap().finalize().unwrap();
        assert_eq!(d.initial, InitialState::SpinUp);

        let two = preset("fig2").unwrap().finalize().unwrap();
        assert_eq!(two.phase, PhaseFactor::Golden);
        assert_eq!(two.n_steps, 1000);
        assert!(!two.heatmap);

        let split = preset("fig3c").unwrap().finalize().unwrap();
        assert_eq!(split.protocol, ProtocolKind::SplitStep);
        assert_eq!(split.phase, PhaseFactor::rational(1, 49).unwrap());
        assert_eq!(split.n_steps, 400);
        assert_eq!(split.detection.stride, 1);

        let noisy = preset("fig4b").unwrap().finalize().unwrap();
        assert_eq!(noisy.noise_eps, 0.2);
        assert_eq!(noisy.runs, 20);
        assert!(noisy.is_ensemble());
        assert_eq!(noisy.n_steps, 200);
    }

    #[test]
    fn presets_leave_the_seed_to_later_layers() {
        for name in PRESET_NAMES {
            assert_eq!(preset(name).unwrap().seed, None, "{name}");
        }
    }
}
