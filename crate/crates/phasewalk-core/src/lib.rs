//! Simulation of discrete-time quantum walks on the line whose shift
//! operator imprints a time- and spin-dependent phase.
//!
//! A spin-1/2 walker on sites `x in [-radius, +radius]` evolves by repeated
//! steps of coin + conditional shift, where the shift at step `n` multiplies
//! the right-moving (spin-up) amplitude by `exp(+i phi n)` and the
//! left-moving (spin-down) amplitude by `exp(-i phi n)`. Rational windings
//! `phi = 2 pi p / q` make the step operator periodic in `n`, producing
//! complete and partial revivals of the initial state; irrational windings
//! (notably the inverse golden ratio) localize the walker near its starting
//! site; random per-step phase kicks degrade both effects into diffusive
//! transport. The [`noise`] module averages such noisy walks over
//! reproducible ensembles.
//!
//! ```
//! use phasewalk_core::{evolve, PhaseFactor, ProtocolSpec, WalkerState};
//!
//! // phi = 2 pi / 100: the walk revives at its starting site after q = 100
//! // steps.
//! let spec = ProtocolSpec::standard(PhaseFactor::rational(1, 100).unwrap());
//! let walk = evolve(&WalkerState::symmetric(101), &spec, 100, false, None).unwrap();
//! assert!(walk.return_probability[100] > 1.0 - 1e-9);
//! ```

pub mod error;
pub mod evolution;
pub mod noise;
pub mod observables;
pub mod operators;
pub mod state;

pub use error::{WalkError, WalkResult};
pub use evolution::{evolve, Trajectory, TrajectoryMeta};
pub use noise::{
    fluctuated_phase, run_ensemble, run_rng, EnsembleResult, NoiseDistribution, NoiseSpec,
};
pub use observables::{
    detect_revivals, max_excursion, mean_position, return_probability, std_dev, strided_min,
    DetectionParams, RevivalEvent, RevivalKind, RevivalReport,
};
pub use operators::{
    apply_coin, apply_shift_down, apply_shift_standard, apply_shift_up, step, CoinMatrix,
    PhaseFactor, ProtocolKind, ProtocolSpec,
};
pub use state::{Distribution, Spin, WalkerState, NORM_TOL};
