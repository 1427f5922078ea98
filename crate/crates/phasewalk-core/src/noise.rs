//! Dephasing noise: a bounded random kick added to each step's imprinted
//! phase, averaged over an ensemble of independent runs.
//!
//! Run r of an ensemble draws one value `R_k` per step from a ChaCha8 stream
//! keyed by the master seed with stream id r, and walks with total step
//! phases `theta_k = phi * k + epsilon * R_k` (the same kick for both spin
//! signs, and for both sub-shifts of a split step). Keying runs by stream id
//! makes the draws independent of execution order, so parallel ensembles are
//! reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{WalkError, WalkResult};
use crate::evolution::evolve;
use crate::operators::ProtocolSpec;
use crate::state::WalkerState;

/// Distribution of the per-step draws `R_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseDistribution {
    /// Uniform on [-1, 1].
    #[default]
    Uniform,
}

/// Ensemble parameters for [`run_ensemble`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Kick amplitude, in [0, 1]: each step phase is shifted by
    /// `epsilon * R_k` radians.
    pub epsilon: f64,
    pub runs: usize,
    pub seed: u64,
    pub distribution: NoiseDistribution,
}

impl NoiseSpec {
    pub const DEFAULT_RUNS: usize = 20;

    pub fn new(epsilon: f64, runs: usize, seed: u64) -> WalkResult<Self> {
        if !(epsilon.is_finite() && (0.0..=1.0).contains(&epsilon)) {
            return Err(WalkError::EpsilonOutOfRange { epsilon });
        }
        if runs == 0 {
            return Err(WalkError::NoRuns);
        }
        Ok(Self {
            epsilon,
            runs,
            seed,
            distribution: NoiseDistribution::Uniform,
        })
    }
}

/// `phase + epsilon * draw`: one noisy imprinted phase, left unreduced.
/// `draw` is expected in [-1, 1]; `epsilon` outside [0, 1] is rejected.
pub fn fluctuated_phase(phase: f64, epsilon: f64, draw: f64) -> WalkResult<f64> {
    if !(epsilon.is_finite() && (0.0..=1.0).contains(&epsilon)) {
        return Err(WalkError::EpsilonOutOfRange { epsilon });
    }
    debug_assert!((-1.0..=1.0).contains(&draw), "draw {draw} outside [-1, 1]");
    Ok(phase + epsilon * draw)
}

/// RNG for one ensemble run: ChaCha8 keyed by the master seed, with the run
/// index as the stream id.
pub fn run_rng(seed: u64, run_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    rng
}

/// Ensemble-averaged observables plus the per-run series they came from.
/// Rows are indexed `0..=n_steps` like a single trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleResult {
    /// Mean over runs of the per-step return probability.
    pub return_probability: Vec<f64>,
    /// Mean over runs of the per-step position expectation value.
    pub mean_position: Vec<f64>,
    /// Mean over runs of the per-step standard deviation.
    pub std_dev: Vec<f64>,
    pub per_run_return_probability: Vec<Vec<f64>>,
    pub per_run_mean_position: Vec<Vec<f64>>,
    pub per_run_std_dev: Vec<Vec<f64>>,
    pub noise: NoiseSpec,
    pub n_steps: usize,
}

impl EnsembleResult {
    pub fn runs(&self) -> usize {
        self.per_run_return_probability.len()
    }
}

/// Walk `noise.runs` independent noisy realizations of `spec` and average
/// their observables.
///
/// Runs are evaluated in parallel; results are deterministic for a given
/// seed regardless of thread count, because each run's draws come from its
/// own counter-based stream and the averaging order is fixed. With
/// `epsilon = 0` every run reproduces the noiseless walk bit for bit.
pub fn run_ensemble(
    initial: &WalkerState,
    spec: &ProtocolSpec,
    noise: &NoiseSpec,
    n_steps: usize,
) -> WalkResult<EnsembleResult> {
    // Fields are public; re-validate rather than trust the construction path.
    NoiseSpec::new(noise.epsilon, noise.runs, noise.seed)?;

    let per_run: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (0..noise.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_rng(noise.seed, run as u64);
            let phases: Vec<f64> = (1..=n_steps)
                .map(|k| {
                    let index = spec.step_origin() + k as i64 - 1;
                    let draw = match noise.distribution {
                        NoiseDistribution::Uniform => rng.gen_range(-1.0..=1.0),
                    };
                    fluctuated_phase(spec.phase().step_phase(index), noise.epsilon, draw)
                        .expect("epsilon validated above")
                })
                .collect();
            let traj = evolve(initial, spec, n_steps, false, Some(&phases))?;
            Ok((traj.return_probability, traj.mean_position, traj.std_dev))
        })
        .collect::<WalkResult<_>>()?;

    let mut return_probability = vec![0.0; n_steps + 1];
    let mut mean_position = vec![0.0; n_steps + 1];
    let mut std_dev = vec![0.0; n_steps + 1];
    for (p, m, s) in &per_run {
        for (acc, v) in return_probability.iter_mut().zip(p) {
            *acc += *v;
        }
        for (acc, v) in mean_position.iter_mut().zip(m) {
            *acc += *v;
        }
        for (acc, v) in std_dev.iter_mut().zip(s) {
            *acc += *v;
        }
    }
    let inv = 1.0 / noise.runs as f64;
    for v in return_probability
        .iter_mut()
        .chain(mean_position.iter_mut())
        .chain(std_dev.iter_mut())
    {
        *v *= inv;
    }

    let mut per_run_return_probability = Vec::with_capacity(per_run.len());
    let mut per_run_mean_position = Vec::with_capacity(per_run.len());
    let mut per_run_std_dev = Vec::with_capacity(per_run.len());
    for (p, m, s) in per_run {
        per_run_return_probability.push(p);
        per_run_mean_position.push(m);
        per_run_std_dev.push(s);
    }
    Ok(EnsembleResult {
        return_probability,
        mean_position,
        std_dev,
        per_run_return_probability,
        per_run_mean_position,
        per_run_std_dev,
        noise: *noise,
        n_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::PhaseFactor;
    use std::f64::consts::TAU;

    fn golden_spec() -> ProtocolSpec {
        ProtocolSpec::standard(PhaseFactor::Golden)
    }

    #[test]
    fn fluctuated_phase_arithmetic() {
        let phi = TAU / 49.0;
        assert_eq!(fluctuated_phase(phi, 0.0, 0.73).unwrap(), phi);
        assert_eq!(fluctuated_phase(1.0, 0.5, -1.0).unwrap(), 0.5);
        assert_eq!(fluctuated_phase(1.0, 1.0, 1.0).unwrap(), 2.0);
        for bad in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(
                fluctuated_phase(1.0, bad, 0.0),
                Err(WalkError::EpsilonOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn noise_spec_validation() {
        assert_eq!(NoiseSpec::DEFAULT_RUNS, 20);
        let spec = NoiseSpec::new(0.25, 20, 7).unwrap();
        assert_eq!(spec.distribution, NoiseDistribution::Uniform);
        assert!(matches!(
            NoiseSpec::new(1.0001, 20, 7),
            Err(WalkError::EpsilonOutOfRange { .. })
        ));
        assert!(matches!(
            NoiseSpec::new(-0.5, 20, 7),
            Err(WalkError::EpsilonOutOfRange { .. })
        ));
        assert_eq!(NoiseSpec::new(0.5, 0, 7).unwrap_err(), WalkError::NoRuns);
    }

    #[test]
    fn run_streams_are_reproducible_and_distinct() {
        let draws = |seed, run| -> Vec<f64> {
            let mut rng = run_rng(seed, run);
            (0..8).map(|_| rng.gen_range(-1.0..=1.0)).collect()
        };
        assert_eq!(draws(42, 0), draws(42, 0));
        assert_ne!(draws(42, 0), draws(42, 1));
        assert_ne!(draws(42, 0), draws(43, 0));
        for d in draws(42, 5) {
            assert!((-1.0..=1.0).contains(&d));
        }
    }

    #[test]
    fn zero_epsilon_reproduces_the_noiseless_walk() {
        let spec = ProtocolSpec::standard(PhaseFactor::rational(1, 4).unwrap());
        let initial = WalkerState::symmetric(9);
        let noise = NoiseSpec::new(0.0, 5, 123).unwrap();
        let ensemble = run_ensemble(&initial, &spec, &noise, 8).unwrap();
        let clean = evolve(&initial, &spec, 8, false, None).unwrap();
        // Each run is bit-identical to the noiseless walk; the average can
        // pick up sum-then-divide rounding at the last ulp.
        for run in &ensemble.per_run_return_probability {
            assert_eq!(*run, clean.return_probability);
        }
        for run in &ensemble.per_run_mean_position {
            assert_eq!(*run, clean.mean_position);
        }
        for run in &ensemble.per_run_std_dev {
            assert_eq!(*run, clean.std_dev);
        }
        for (a, b) in ensemble
            .return_probability
            .iter()
            .zip(&clean.return_probability)
            .chain(ensemble.mean_position.iter().zip(&clean.mean_position))
            .chain(ensemble.std_dev.iter().zip(&clean.std_dev))
        {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn ensembles_are_deterministic_in_the_seed() {
        let initial = WalkerState::symmetric(7);
        let noise = NoiseSpec::new(0.3, 3, 42).unwrap();
        let a = run_ensemble(&initial, &golden_spec(), &noise, 6).unwrap();
        let b = run_ensemble(&initial, &golden_spec(), &noise, 6).unwrap();
        assert_eq!(a, b);
        let other_seed = NoiseSpec::new(0.3, 3, 43).unwrap();
        let c = run_ensemble(&initial, &golden_spec(), &other_seed, 6).unwrap();
        assert_ne!(a.return_probability, c.return_probability);
    }

    #[test]
    fn averages_recompute_from_per_run_series() {
        let initial = WalkerState::symmetric(7);
        let noise = NoiseSpec::new(0.8, 4, 9).unwrap();
        let e = run_ensemble(&initial, &golden_spec(), &noise, 6).unwrap();
        assert_eq!(e.runs(), 4);
        for series in &e.per_run_return_probability {
            assert_eq!(series.len(), 7);
        }
        let mut manual = vec![0.0; 7];
        for run in &e.per_run_return_probability {
            for (acc, v) in manual.iter_mut().zip(run) {
                *acc += *v;
            }
        }
        for v in &mut manual {
            *v *= 0.25;
        }
        assert_eq!(manual, e.return_probability);
    }

    #[test]
    fn invalid_specs_are_rejected_at_run_time() {
        let initial = WalkerState::symmetric(4);
        let bad_eps = NoiseSpec {
            epsilon: 2.0,
            runs: 3,
            seed: 1,
            distribution: NoiseDistribution::Uniform,
        };
        assert!(matches!(
            run_ensemble(&initial, &golden_spec(), &bad_eps, 3),
            Err(WalkError::EpsilonOutOfRange { .. })
        ));
        let bad_runs = NoiseSpec {
            runs: 0,
            ..NoiseSpec::new(0.5, 1, 1).unwrap()
        };
        assert_eq!(
            run_ensemble(&initial, &golden_spec(), &bad_runs, 3).unwrap_err(),
            WalkError::NoRuns
        );
    }

    #[test]
    fn window_errors_propagate_from_runs() {
        let initial = WalkerState::symmetric(3);
        let noise = NoiseSpec::new(0.5, 2, 1).unwrap();
        assert!(matches!(
            run_ensemble(&initial, &golden_spec(), &noise, 10),
            Err(WalkError::WindowTooSmall { .. })
        ));
    }
}
