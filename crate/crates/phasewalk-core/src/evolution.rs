//! Multi-step evolution: the ordered product of step unitaries applied to an
//! initial state, with observables recorded at every step.

use serde::{Deserialize, Serialize};

use crate::error::{WalkError, WalkResult};
use crate::operators::{step, ProtocolSpec};
use crate::state::{Distribution, WalkerState, NORM_TOL};

/// How a [`Trajectory`] was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub protocol: ProtocolSpec,
    pub n_steps: usize,
    /// "symmetric", "spin-up", or "custom".
    pub initial_label: String,
    /// True when the phases came from an external per-step sequence.
    pub noisy_phase: bool,
}

/// Per-step observables of one walk, indexed `0..=n_steps` with row 0
/// describing the initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Probability at the starting site (the origin).
    pub return_probability: Vec<f64>,
    /// Position expectation value `<x>`.
    pub mean_position: Vec<f64>,
    /// Position standard deviation `sqrt(<x^2> - <x>^2)`.
    pub std_dev: Vec<f64>,
    /// Full site-resolved snapshots, if requested.
    pub distributions: Option<Vec<Distribution>>,
    pub final_state: WalkerState,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    /// Number of recorded rows, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.return_probability.len()
    }

    pub fn is_empty(&self) -> bool {
        self.return_probability.is_empty()
    }
}

struct StepMeasurement {
    return_probability: f64,
    mean: f64,
    sigma: f64,
    probs: Option<Vec<f64>>,
}

/// One pass over the state: site probabilities (optional), their total as a
/// normalization guard, and the moment-based observables.
fn measure(state: &WalkerState, record: bool) -> WalkResult<StepMeasurement> {
    let radius = state.radius();
    let mut probs = record.then(|| Vec::with_capacity(state.num_sites()));
    let mut total = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    let mut return_probability = 0.0;
    for (i, (u, d)) in state.up.iter().zip(state.down.iter()).enumerate() {
        let p = u.norm_sqr() + d.norm_sqr();
        let x = i as f64 - radius as f64;
        total += p;
        m1 += x * p;
        m2 += x * x * p;
        if i == radius {
            return_probability = p;
        }
        if let Some(v) = probs.as_mut() {
            v.push(p);
        }
    }
    if (total - 1.0).abs() > NORM_TOL {
        return Err(WalkError::NotNormalized { norm_sqr: total });
    }
    Ok(StepMeasurement {
        return_probability,
        mean: m1,
        sigma: (m2 - m1 * m1).max(0.0).sqrt(),
        probs,
    })
}

/// Run `n_steps` steps of `spec` from `initial` and record observables.
///
/// The window must satisfy `radius >= n_steps + 1` so the light cone
/// (plus one guard site) never reaches the boundary. Step `k` (1-based)
/// uses step index `spec.step_origin() + k - 1`.
///
/// `phase_sequence`, when given, must hold one entry per step: the *total*
/// imprinted phase for that step in radians, overriding
/// `phase.step_phase(index)`. The noise module uses this hook; passing
/// `None` runs the noiseless protocol.
pub fn evolve(
    initial: &WalkerState,
    spec: &ProtocolSpec,
    n_steps: usize,
    record_distributions: bool,
    phase_sequence: Option<&[f64]>,
) -> WalkResult<Trajectory> {
    let radius = initial.radius();
    let required = n_steps.saturating_add(1);
    if radius < required {
        return Err(WalkError::WindowTooSmall {
            radius,
            n_steps,
            required,
        });
    }
    if let Some(seq) = phase_sequence {
        if seq.len() != n_steps {
            return Err(WalkError::PhaseSequenceLength {
                expected: n_steps,
                actual: seq.len(),
            });
        }
    }

    let mut state = initial.clone();
    let mut return_probability = Vec::with_capacity(n_steps + 1);
    let mut mean_position = Vec::with_capacity(n_steps + 1);
    let mut std_dev = Vec::with_capacity(n_steps + 1);
    let mut distributions = record_distributions.then(|| Vec::with_capacity(n_steps + 1));

    let mut record_row = |state: &WalkerState, step_index: usize| -> WalkResult<()> {
        let m = measure(state, record_distributions)?;
        return_probability.push(m.return_probability);
        mean_position.push(m.mean);
        std_dev.push(m.sigma);
        if let Some(d) = distributions.as_mut() {
            d.push(Distribution::new(
                radius,
                step_index,
                m.probs.expect("probs recorded"),
            ));
        }
        Ok(())
    };

    record_row(&state, 0)?;
    for k in 1..=n_steps {
        let index = spec.step_origin() + k as i64 - 1;
        let overridden = phase_sequence.map(|s| s[k - 1]);
        step(&mut state, spec, index, overridden)?;
        record_row(&state, k)?;
    }

    let meta = TrajectoryMeta {
        protocol: spec.clone(),
        n_steps,
        initial_label: label_for(initial),
        noisy_phase: phase_sequence.is_some(),
    };
    Ok(Trajectory {
        return_probability,
        mean_position,
        std_dev,
        distributions,
        final_state: state,
        meta,
    })
}

fn label_for(initial: &WalkerState) -> String {
    let r = initial.radius();
    if *initial == WalkerState::symmetric(r) {
        "symmetric".to_owned()
    } else if *initial == WalkerState::spin_up(r) {
        "spin-up".to_owned()
    } else {
        "custom".to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::PhaseFactor;
    use crate::state::Spin;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;

    fn standard(p: i64, q: i64) -> ProtocolSpec {
        ProtocolSpec::standard(PhaseFactor::rational(p, q).unwrap())
    }

    #[test]
    fn window_must_cover_light_cone_plus_guard() {
        let err = evolve(&WalkerState::symmetric(3), &standard(1, 4), 3, false, None).unwrap_err();
        assert_eq!(
            err,
            WalkError::WindowTooSmall {
                radius: 3,
                n_steps: 3,
                required: 4
            }
        );
        assert!(evolve(&WalkerState::symmetric(4), &standard(1, 4), 3, false, None).is_ok());
    }

    #[test]
    fn zero_steps_records_the_initial_row_only() {
        let traj = evolve(&WalkerState::symmetric(1), &standard(1, 4), 0, true, None).unwrap();
        assert_eq!(traj.len(), 1);
        assert_abs_diff_eq!(traj.return_probability[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(traj.mean_position[0], 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(traj.std_dev[0], 0.0, epsilon = 0.0);
        let dists = traj.distributions.unwrap();
        assert_eq!(dists.len(), 1);
        assert_eq!(dists[0].step_index(), 0);
        assert_eq!(traj.final_state, WalkerState::symmetric(1));
        assert_eq!(traj.meta.initial_label, "symmetric");
        assert!(!traj.meta.noisy_phase);
    }

    #[test]
    fn phase_sequence_length_is_checked() {
        let seq = [0.0, 0.1];
        let err = evolve(
            &WalkerState::symmetric(5),
            &standard(1, 4),
            3,
            false,
            Some(&seq),
        )
        .unwrap_err();
        assert_eq!(
            err,
            WalkError::PhaseSequenceLength {
                expected: 3,
                actual: 2
            }
        );
    }

    #[test]
    fn quarter_winding_returns_only_partially() {
        // Small denominators do not revive completely: the one-period
        // operator product approaches a scalar only as q grows (deficit
        // ~ 2^(-q/2)). For q = 4 the oracle-confirmed dyadic values are
        // P(2) = 1/2, P(4) = 5/8.
        let traj = evolve(&WalkerState::symmetric(5), &standard(1, 4), 4, false, None).unwrap();
        assert_abs_diff_eq!(traj.return_probability[2], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(traj.return_probability[4], 0.625, epsilon = 1e-12);
        assert_eq!(traj.return_probability[1], 0.0);
        assert_eq!(traj.return_probability[3], 0.0);
        let overlap = WalkerState::symmetric(5).overlap(&traj.final_state);
        assert_abs_diff_eq!(overlap.norm(), 0.625f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn hundredth_winding_revives_after_a_full_period() {
        let traj =
            evolve(&WalkerState::symmetric(101), &standard(1, 100), 100, false, None).unwrap();
        assert!(traj.return_probability[100] >= 1.0 - 1e-9);
        assert!(traj.std_dev[100] < 1e-3);
        for n in (2..100).step_by(2) {
            assert!(traj.return_probability[n] < 1.0 - 1e-3);
        }
        let overlap = WalkerState::symmetric(101).overlap(&traj.final_state);
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn evolve_matches_manual_stepping() {
        let spec = ProtocolSpec::standard(PhaseFactor::rational(2, 5).unwrap());
        let initial = WalkerState::spin_up(8);
        let traj = evolve(&initial, &spec, 7, false, None).unwrap();
        let mut state = initial;
        for k in 1..=7 {
            step(&mut state, &spec, k, None).unwrap();
        }
        assert_eq!(traj.final_state, state);
        assert_eq!(traj.len(), 8);
    }

    #[test]
    fn step_origin_zero_makes_the_first_step_phase_free() {
        let spec = standard(1, 4).with_step_origin(0);
        let traj = evolve(&WalkerState::spin_up(2), &spec, 1, false, None).unwrap();
        // theta_0 = 0: plain Hadamard walk step, amplitudes 1/sqrt(2) both sides.
        let f = traj.final_state;
        assert_abs_diff_eq!(
            f.amplitude(Spin::Up, 1).re,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(f.amplitude(Spin::Up, 1).im, 0.0, epsilon = 0.0);
    }

    #[test]
    fn odd_steps_leave_the_origin_empty_in_the_standard_protocol() {
        let traj = evolve(&WalkerState::symmetric(6), &standard(1, 3), 5, false, None).unwrap();
        for n in [1, 3, 5] {
            assert_eq!(traj.return_probability[n], 0.0);
        }
        for n in [2, 4] {
            assert!(traj.return_probability[n] > 0.0);
        }
    }

    #[test]
    fn recorded_distributions_are_tagged_and_normalized() {
        let traj = evolve(&WalkerState::symmetric(6), &standard(1, 5), 5, true, None).unwrap();
        let dists = traj.distributions.as_ref().unwrap();
        assert_eq!(dists.len(), 6);
        for (k, d) in dists.iter().enumerate() {
            assert_eq!(d.step_index(), k);
            assert_abs_diff_eq!(d.total(), 1.0, epsilon = 1e-12);
            assert_eq!(d.probability(0), traj.return_probability[k]);
        }
        let plain = evolve(&WalkerState::symmetric(6), &standard(1, 5), 5, false, None).unwrap();
        assert!(plain.distributions.is_none());
        assert_eq!(plain.return_probability, traj.return_probability);
    }

    #[test]
    fn custom_initial_states_are_labeled_and_checked() {
        let mut custom = WalkerState::zero(3);
        custom
            .set_amplitude(Spin::Up, 1, C64::new(0.6, 0.0))
            .unwrap();
        custom
            .set_amplitude(Spin::Down, -1, C64::new(0.0, 0.8))
            .unwrap();
        let traj = evolve(&custom, &standard(1, 4), 2, false, None).unwrap();
        assert_eq!(traj.meta.initial_label, "custom");

        let unnorm = WalkerState::zero(3);
        match evolve(&unnorm, &standard(1, 4), 2, false, None) {
            Err(WalkError::NotNormalized { norm_sqr }) => assert_eq!(norm_sqr, 0.0),
            other => panic!("expected NotNormalized, got {other:?}"),
        }
    }

    #[test]
    fn external_phase_sequence_drives_the_walk() {
        let spec = standard(1, 4);
        let seq: Vec<f64> = (1..=3)
            .map(|n| PhaseFactor::rational(1, 4).unwrap().step_phase(n))
            .collect();
        let noisy = evolve(&WalkerState::symmetric(4), &spec, 3, false, Some(&seq)).unwrap();
        let clean = evolve(&WalkerState::symmetric(4), &spec, 3, false, None).unwrap();
        // Supplying the noiseless phases reproduces the noiseless walk bit for bit.
        assert_eq!(noisy.final_state, clean.final_state);
        assert_eq!(noisy.return_probability, clean.return_probability);
        assert!(noisy.meta.noisy_phase);
        assert!(!clean.meta.noisy_phase);
    }
}
