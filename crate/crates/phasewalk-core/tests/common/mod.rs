//! Dense-matrix reference implementation shared by the integration tests.
//!
//! Everything here works with explicit matrices and matrix-vector products,
//! written directly from the operator definitions and sharing no code with
//! the library's banded stepper, so the two can be compared blindly.
//!
//! States flatten as `index = spin * (2 radius + 1) + (site + radius)` with
//! spin 0 = up, 1 = down. The shift matrices drop the amplitudes that would
//! leave the window, so comparisons must keep the light cone strictly
//! inside it (the library errors out in that case anyway).

// Each integration-test binary compiles its own copy and uses a subset; the
// matrices are assembled by explicit indices on purpose.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64 as C64;
use phasewalk_core::{ProtocolKind, ProtocolSpec, Spin, WalkerState};
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

pub type Matrix = Vec<Vec<C64>>;

pub fn dim(radius: usize) -> usize {
    2 * (2 * radius + 1)
}

pub fn zeros(n: usize) -> Matrix {
    vec![vec![C64::new(0.0, 0.0); n]; n]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(m: &Matrix, v: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Flatten a walker state into the oracle's basis order.
pub fn flatten(state: &WalkerState) -> Vec<C64> {
    let r = state.radius() as i64;
    let mut v = Vec::with_capacity(dim(state.radius()));
    for spin in [Spin::Up, Spin::Down] {
        for site in -r..=r {
            v.push(state.amplitude(spin, site));
        }
    }
    v
}

/// Probability of finding the flattened state at `site`, either spin.
pub fn site_probability(v: &[C64], radius: usize, site: i64) -> f64 {
    let sites = 2 * radius + 1;
    let i = (site + radius as i64) as usize;
    v[i].norm_sqr() + v[sites + i].norm_sqr()
}

pub fn hadamard_entries() -> [[C64; 2]; 2] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// The coin acting identically on every site.
pub fn coin_matrix(radius: usize, entries: [[C64; 2]; 2]) -> Matrix {
    let sites = 2 * radius + 1;
    let mut m = zeros(dim(radius));
    for s in 0..sites {
        m[s][s] = entries[0][0];
        m[s][sites + s] = entries[0][1];
        m[sites + s][s] = entries[1][0];
        m[sites + s][sites + s] = entries[1][1];
    }
    m
}

/// Shift spin-up right with phase `e^{+i theta}`; spin-down untouched.
pub fn shift_up_matrix(radius: usize, theta: f64) -> Matrix {
    let sites = 2 * radius + 1;
    let phase = C64::from_polar(1.0, theta);
    let mut m = zeros(dim(radius));
    for s in 0..sites - 1 {
        m[s + 1][s] = phase;
    }
    for s in 0..sites {
        m[sites + s][sites + s] = C64::new(1.0, 0.0);
    }
    m
}

/// Shift spin-down left with phase `e^{-i theta}`; spin-up untouched.
pub fn shift_down_matrix(radius: usize, theta: f64) -> Matrix {
    let sites = 2 * radius + 1;
    let phase = C64::from_polar(1.0, -theta);
    let mut m = zeros(dim(radius));
    for s in 0..sites {
        m[s][s] = C64::new(1.0, 0.0);
    }
    for s in 1..sites {
        m[sites + s - 1][sites + s] = phase;
    }
    m
}

/// Both spin components shifted at once: up right with `e^{+i theta}`, down
/// left with `e^{-i theta}`.
pub fn shift_both_matrix(radius: usize, theta: f64) -> Matrix {
    let sites = 2 * radius + 1;
    let up = C64::from_polar(1.0, theta);
    let down = C64::from_polar(1.0, -theta);
    let mut m = zeros(dim(radius));
    for s in 0..sites - 1 {
        m[s + 1][s] = up;
    }
    for s in 1..sites {
        m[sites + s - 1][sites + s] = down;
    }
    m
}

/// The imprinted phase at step `n` for the protocol's phase setting,
/// computed the plain way (no compensated reduction).
pub fn phase_at(spec: &ProtocolSpec, n: i64) -> f64 {
    use phasewalk_core::PhaseFactor;
    match spec.phase() {
        PhaseFactor::Rational { p, q } => {
            let r = (p as i128 * n as i128).rem_euclid(q as i128);
            TAU * (r as f64) / (q as f64)
        }
        PhaseFactor::Radians(phi) => phi * n as f64,
        PhaseFactor::Golden => TAU * ((5.0f64.sqrt() - 1.0) / 2.0) * n as f64,
    }
}

/// One full step of the protocol with the imprinted phase given directly.
pub fn step_matrix_from_theta(spec: &ProtocolSpec, radius: usize, theta: f64) -> Matrix {
    match spec.kind() {
        ProtocolKind::Standard => matmul(
            &shift_both_matrix(radius, theta),
            &coin_matrix(radius, spec.coin1().entries()),
        ),
        ProtocolKind::SplitStep => {
            let c1 = coin_matrix(radius, spec.coin1().entries());
            let up = shift_up_matrix(radius, theta);
            let c2 = coin_matrix(radius, spec.coin2().entries());
            let down = shift_down_matrix(radius, theta);
            matmul(&down, &matmul(&c2, &matmul(&up, &c1)))
        }
    }
}

/// One full step of the protocol as a single dense matrix.
pub fn step_matrix(spec: &ProtocolSpec, radius: usize, n: i64) -> Matrix {
    step_matrix_from_theta(spec, radius, phase_at(spec, n))
}

/// Product of the step matrices for steps `1..=n_steps` (time ordered:
/// later steps multiply from the left).
pub fn walk_matrix(spec: &ProtocolSpec, radius: usize, n_steps: usize) -> Matrix {
    let mut u = identity(dim(radius));
    for k in 1..=n_steps {
        let n = spec.step_origin() + k as i64 - 1;
        u = matmul(&step_matrix(spec, radius, n), &u);
    }
    u
}

/// Evolve a flattened state through `n_steps` matrix-vector products.
pub fn evolve_dense(spec: &ProtocolSpec, initial: &WalkerState, n_steps: usize) -> Vec<C64> {
    let radius = initial.radius();
    let mut v = flatten(initial);
    for k in 1..=n_steps {
        let n = spec.step_origin() + k as i64 - 1;
        v = matvec(&step_matrix(spec, radius, n), &v);
    }
    v
}

/// Largest entry-wise distance between two flattened states.
pub fn max_amplitude_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
