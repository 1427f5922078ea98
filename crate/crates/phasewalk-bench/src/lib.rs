//! Shared setup for the criterion benches.

use phasewalk_core::{step, PhaseFactor, ProtocolSpec, WalkerState};

pub fn standard_spec(p: i64, q: i64) -> ProtocolSpec {
    ProtocolSpec::standard(PhaseFactor::rational(p, q).expect("valid ratio"))
}

pub fn split_spec(p: i64, q: i64) -> ProtocolSpec {
    ProtocolSpec::split_step(PhaseFactor::rational(p, q).expect("valid ratio"))
}

pub fn golden_spec() -> ProtocolSpec {
    ProtocolSpec::standard(PhaseFactor::Golden)
}

/// A state evolved partway into its window, so one further step has to touch
/// every populated site while staying clear of the boundary.
pub fn warmed_state(radius: usize, warm_steps: usize, spec: &ProtocolSpec) -> WalkerState {
    assert!(
        warm_steps + 2 <= radius,
        "warm-up would push the light cone out of the window"
    );
    let mut state = WalkerState::symmetric(radius);
    for k in 1..=warm_steps as i64 {
        step(&mut state, spec, k, None).expect("inside the window");
    }
    state
}
