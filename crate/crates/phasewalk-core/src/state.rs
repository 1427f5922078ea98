//! Spinor walker states on a finite symmetric window of the 1D lattice.
//!
//! A state holds one complex amplitude per (spin, site) pair for sites
//! `x in [-radius, +radius]`; amplitudes outside the window are implicitly
//! zero. Windows are sized so the ballistic light cone never reaches the
//! edge, which lets the shift operators treat boundary crossings as hard
//! errors instead of silently truncating probability.

use num_complex::Complex64 as C64;

use crate::error::{WalkError, WalkResult};

/// Absolute tolerance on `||psi||^2 - 1` beyond which probability readouts
/// refuse to run.
pub const NORM_TOL: f64 = 1e-6;

/// Coin (internal, spin-1/2) component of the walker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

/// Two-component wavefunction over the window `[-radius, +radius]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkerState {
    radius: usize,
    // Amplitude vectors indexed by i = site + radius.
    pub(crate) up: Vec<C64>,
    pub(crate) down: Vec<C64>,
}

impl WalkerState {
    /// All-zero (unnormalized) state; building block for custom states.
    pub fn zero(radius: usize) -> Self {
        let n = 2 * radius + 1;
        Self {
            radius,
            up: vec![C64::ZERO; n],
            down: vec![C64::ZERO; n],
        }
    }

    /// Walker at the origin in the balanced spin state
    /// `(|up> + i |down>) / sqrt(2)`, which walks symmetrically under the
    /// Hadamard coin.
    pub fn symmetric(radius: usize) -> Self {
        let mut s = Self::zero(radius);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        s.up[radius] = C64::new(r, 0.0);
        s.down[radius] = C64::new(0.0, r);
        s
    }

    /// Walker at the origin fully polarized in `|up>`.
    pub fn spin_up(radius: usize) -> Self {
        let mut s = Self::zero(radius);
        s.up[radius] = C64::ONE;
        s
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of lattice sites in the window, `2 * radius + 1`.
    pub fn num_sites(&self) -> usize {
        2 * self.radius + 1
    }

    pub(crate) fn index(&self, site: i64) -> Option<usize> {
        let r = self.radius as i64;
        if (-r..=r).contains(&site) {
            Some((site + r) as usize)
        } else {
            None
        }
    }

    /// Amplitude of `(spin, site)`; zero outside the window.
    pub fn amplitude(&self, spin: Spin, site: i64) -> C64 {
        match self.index(site) {
            Some(i) => match spin {
                Spin::Up => self.up[i],
                Spin::Down => self.down[i],
            },
            None => C64::ZERO,
        }
    }

    /// Overwrite one amplitude. Errors outside the window.
    pub fn set_amplitude(&mut self, spin: Spin, site: i64, value: C64) -> WalkResult<()> {
        let i = self.index(site).ok_or(WalkError::SiteOutOfWindow {
            site,
            radius: self.radius,
        })?;
        match spin {
            Spin::Up => self.up[i] = value,
            Spin::Down => self.down[i] = value,
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up
            .iter()
            .chain(self.down.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Rescale to unit norm. Errors on a numerically zero vector.
    pub fn normalize(&mut self) -> WalkResult<()> {
        let n2 = self.norm_sqr();
        if n2 <= f64::MIN_POSITIVE {
            return Err(WalkError::ZeroNorm { norm_sqr: n2 });
        }
        let inv = 1.0 / n2.sqrt();
        for a in self.up.iter_mut().chain(self.down.iter_mut()) {
            *a *= inv;
        }
        Ok(())
    }

    /// Inner product `<self|other>`, zero-padding the narrower window.
    pub fn overlap(&self, other: &Self) -> C64 {
        let r = self.radius.min(other.radius) as i64;
        let mut acc = C64::ZERO;
        for site in -r..=r {
            let i = self.index(site).expect("site within min radius");
            let j = other.index(site).expect("site within min radius");
            acc += self.up[i].conj() * other.up[j] + self.down[i].conj() * other.down[j];
        }
        acc
    }

    /// Site-resolved probabilities `P(x) = |psi_up(x)|^2 + |psi_down(x)|^2`.
    ///
    /// Requires the state to be normalized within [`NORM_TOL`]; the returned
    /// distribution carries step index 0 (use [`crate::evolve`] to get
    /// distributions tagged with their true step).
    pub fn position_distribution(&self) -> WalkResult<Distribution> {
        let probabilities: Vec<f64> = self
            .up
            .iter()
            .zip(self.down.iter())
            .map(|(u, d)| u.norm_sqr() + d.norm_sqr())
            .collect();
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(WalkError::NotNormalized { norm_sqr: total });
        }
        Ok(Distribution {
            radius: self.radius,
            step_index: 0,
            probabilities,
        })
    }
}

/// Probability-per-site snapshot of a walk at one time step.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    radius: usize,
    step_index: usize,
    // Indexed by i = site + radius, like the state amplitudes.
    probabilities: Vec<f64>,
}

impl Distribution {
    pub(crate) fn new(radius: usize, step_index: usize, probabilities: Vec<f64>) -> Self {
        debug_assert_eq!(probabilities.len(), 2 * radius + 1);
        Self {
            radius,
            step_index,
            probabilities,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Time step this snapshot belongs to (0 = initial state).
    pub fn step_index(&self) -> usize {
        self.step_index
    }

    /// Probability at `site`; zero outside the window.
    pub fn probability(&self, site: i64) -> f64 {
        let r = self.radius as i64;
        if (-r..=r).contains(&site) {
            self.probabilities[(site + r) as usize]
        } else {
            0.0
        }
    }

    /// Raw probability vector, index `i` holding site `i - radius`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Iterate `(site, probability)` pairs from `-radius` to `+radius`.
    pub fn site_probabilities(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let r = self.radius as i64;
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - r, p))
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}
