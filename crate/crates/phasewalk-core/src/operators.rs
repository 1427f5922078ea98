//! Coin and shift operators, and the time-dependent phase the shifts imprint.
//!
//! One step of the standard protocol is `S(theta_n) . C`: a 2x2 coin acting
//! on the spin at every site, then a spin-conditioned translation that moves
//! spin-up one site right with phase factor `exp(+i theta_n)` and spin-down
//! one site left with `exp(-i theta_n)`. The split-step protocol interleaves
//! two coins with one-sided shifts: `S_down(theta_n) . C2 . S_up(theta_n) . C1`.
//! In both cases `theta_n = phi * n` for step index `n`, so the imprinted
//! phase depends on time as well as spin.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{WalkError, WalkResult};
use crate::state::{Spin, WalkerState};

/// Maximum entrywise deviation of `C^H C` from the identity accepted by
/// [`CoinMatrix::new`].
pub const UNITARITY_TOL: f64 = 1e-12;

/// Unitary 2x2 coin in the `(up, down)` basis; row 0 is the up output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinMatrix {
    entries: [[C64; 2]; 2],
}

impl CoinMatrix {
    /// Validate unitarity within [`UNITARITY_TOL`] and wrap the matrix.
    pub fn new(entries: [[C64; 2]; 2]) -> WalkResult<Self> {
        let coin = Self { entries };
        let defect = coin.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(WalkError::NonUnitaryCoin { defect });
        }
        Ok(coin)
    }

    /// The balanced Hadamard coin `[[1, 1], [1, -1]] / sqrt(2)`.
    pub fn hadamard() -> Self {
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            entries: [[r, r], [r, -r]],
        }
    }

    pub fn identity() -> Self {
        Self {
            entries: [[C64::ONE, C64::ZERO], [C64::ZERO, C64::ONE]],
        }
    }

    pub fn entries(&self) -> [[C64; 2]; 2] {
        self.entries
    }

    /// Max entrywise `|C^H C - I|`; zero for an exactly unitary matrix.
    pub fn unitarity_defect(&self) -> f64 {
        let m = &self.entries;
        let mut defect: f64 = 0.0;
        for row in 0..2 {
            for col in 0..2 {
                // (C^H C)[row][col] = sum_k conj(m[k][row]) m[k][col]
                let mut e = C64::ZERO;
                for mk in m {
                    e += mk[row].conj() * mk[col];
                }
                if row == col {
                    e -= C64::ONE;
                }
                defect = defect.max(e.norm());
            }
        }
        defect
    }

    /// Apply to one spinor `(up, down)`.
    #[inline]
    pub fn apply(&self, up: C64, down: C64) -> (C64, C64) {
        let m = &self.entries;
        (
            m[0][0] * up + m[0][1] * down,
            m[1][0] * up + m[1][1] * down,
        )
    }
}

/// The phase-factor parameter `phi` of the time-dependent shift phase
/// `theta_n = phi * n`.
///
/// The rational form `phi = 2 pi p / q` is kept symbolic so step phases can
/// be reduced exactly (`theta_n = 2 pi ((p n) mod q) / q`), which makes the
/// q-periodicity of the step operator bit-exact. Literal and golden phases
/// go through a compensated floating-point reduction instead.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseFactor {
    /// `phi = 2 pi p / q` with `q >= 1` and `gcd(|p|, q) = 1`.
    Rational { p: i64, q: i64 },
    /// `phi` given directly in radians.
    Radians(f64),
    /// `phi = 2 pi (sqrt(5) - 1) / 2`: the inverse golden ratio winding,
    /// maximally far from rational resonances.
    Golden,
}

impl PhaseFactor {
    /// Strict constructor for `phi = 2 pi p / q`; rejects `q < 1` and ratios
    /// not in lowest terms (see [`PhaseFactor::rational_reduced`]).
    pub fn rational(p: i64, q: i64) -> WalkResult<Self> {
        if q < 1 {
            return Err(WalkError::NonPositiveDenominator { p, q });
        }
        let g = num_integer::gcd(p, q);
        if g != 1 {
            return Err(WalkError::UnreducedRatio { p, q, gcd: g });
        }
        Ok(Self::Rational { p, q })
    }

    /// Like [`PhaseFactor::rational`] but divides out the gcd. The boolean
    /// reports whether the input was rewritten.
    pub fn rational_reduced(p: i64, q: i64) -> WalkResult<(Self, bool)> {
        if q < 1 {
            return Err(WalkError::NonPositiveDenominator { p, q });
        }
        let g = num_integer::gcd(p, q);
        Ok((
            Self::Rational {
                p: p / g,
                q: q / g,
            },
            g != 1,
        ))
    }

    /// The bare angle `phi` in radians.
    pub fn phi(&self) -> f64 {
        use std::f64::consts::TAU;
        match *self {
            Self::Rational { p, q } => TAU * (p as f64) / (q as f64),
            Self::Radians(v) => v,
            Self::Golden => TAU * (5.0_f64.sqrt() - 1.0) / 2.0,
        }
    }

    /// The total phase `theta_n = phi * n` imprinted at step `n`, reduced to
    /// `[0, 2 pi)`.
    pub fn step_phase(&self, step_index: i64) -> f64 {
        match *self {
            Self::Rational { p, q } => {
                let r = (p as i128 * step_index as i128).rem_euclid(q as i128);
                std::f64::consts::TAU * (r as f64 / q as f64)
            }
            Self::Radians(phi) => reduce_product_mod_tau(phi, step_index as f64),
            Self::Golden => reduce_product_mod_tau(self.phi(), step_index as f64),
        }
    }
}

/// `(phi * n) mod 2 pi` with the product split by FMA and the modulus taken
/// against a two-term extension of `2 pi`, so the result stays accurate to a
/// few ulp out to `n ~ 10^6` where naive accumulation of `exp(i phi)` factors
/// has long lost the revival structure.
fn reduce_product_mod_tau(phi: f64, n: f64) -> f64 {
    use std::f64::consts::TAU;
    // True 2 pi is TAU + TAU_TAIL to about 96 bits.
    const TAU_TAIL: f64 = 2.449_293_598_294_706_4e-16;
    let hi = phi * n;
    let lo = phi.mul_add(n, -hi);
    let r0 = hi.rem_euclid(TAU); // IEEE remainder: exact
    let periods = ((hi - r0) / TAU).round();
    (r0 + (lo - periods * TAU_TAIL)).rem_euclid(TAU)
}

/// Which walk protocol a [`ProtocolSpec`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    /// Coin then two-sided shift per step.
    Standard,
    /// Two coins interleaved with one-sided shifts per step; displacements
    /// per step are {-1, 0, +1}, so there is no parity constraint.
    SplitStep,
}

/// Full description of the unitary applied at each step.
///
/// Two coin slots are always carried; the standard protocol uses only
/// `coin1`. `step_origin` is the index assigned to the first step (default 1,
/// matching `theta_n = phi * n` with n counting steps from one).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    kind: ProtocolKind,
    phase: PhaseFactor,
    coin1: CoinMatrix,
    coin2: CoinMatrix,
    step_origin: i64,
}

impl ProtocolSpec {
    /// Standard protocol with the Hadamard coin.
    pub fn standard(phase: PhaseFactor) -> Self {
        Self {
            kind: ProtocolKind::Standard,
            phase,
            coin1: CoinMatrix::hadamard(),
            coin2: CoinMatrix::hadamard(),
            step_origin: 1,
        }
    }

    /// Split-step protocol with Hadamard coins in both slots.
    pub fn split_step(phase: PhaseFactor) -> Self {
        Self {
            kind: ProtocolKind::SplitStep,
            ..Self::standard(phase)
        }
    }

    /// Replace the (first) coin.
    pub fn with_coin1(mut self, coin: CoinMatrix) -> Self {
        self.coin1 = coin;
        self
    }

    /// Replace the second coin (split-step only; ignored by standard).
    pub fn with_coin2(mut self, coin: CoinMatrix) -> Self {
        self.coin2 = coin;
        self
    }

    /// Index of the first step (default 1).
    pub fn with_step_origin(mut self, origin: i64) -> Self {
        self.step_origin = origin;
        self
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn phase(&self) -> PhaseFactor {
        self.phase
    }

    pub fn coin1(&self) -> &CoinMatrix {
        &self.coin1
    }

    pub fn coin2(&self) -> &CoinMatrix {
        &self.coin2
    }

    pub fn step_origin(&self) -> i64 {
        self.step_origin
    }
}

/// Apply a coin to the spinor at every site. Exactly norm-preserving up to
/// rounding; never fails.
pub fn apply_coin(state: &mut WalkerState, coin: &CoinMatrix) {
    let m = coin.entries;
    for (u, d) in state.up.iter_mut().zip(state.down.iter_mut()) {
        let nu = m[0][0] * *u + m[0][1] * *d;
        let nd = m[1][0] * *u + m[1][1] * *d;
        *u = nu;
        *d = nd;
    }
}

/// Move the spin-up component one site right, multiplying by
/// `exp(+i theta)`. Errors (without touching the state) if nonzero amplitude
/// sits on the right edge.
pub fn apply_shift_up(state: &mut WalkerState, theta: f64) -> WalkResult<()> {
    let n = state.up.len();
    if state.up[n - 1] != C64::ZERO {
        return Err(WalkError::BoundaryOverflow {
            spin: Spin::Up,
            site: state.radius() as i64,
        });
    }
    let ph = C64::from_polar(1.0, theta);
    for i in (1..n).rev() {
        state.up[i] = ph * state.up[i - 1];
    }
    state.up[0] = C64::ZERO;
    Ok(())
}

/// Move the spin-down component one site left, multiplying by
/// `exp(-i theta)`. Errors (without touching the state) if nonzero amplitude
/// sits on the left edge.
pub fn apply_shift_down(state: &mut WalkerState, theta: f64) -> WalkResult<()> {
    let n = state.down.len();
    if state.down[0] != C64::ZERO {
        return Err(WalkError::BoundaryOverflow {
            spin: Spin::Down,
            site: -(state.radius() as i64),
        });
    }
    let ph = C64::from_polar(1.0, -theta);
    for i in 0..n - 1 {
        state.down[i] = ph * state.down[i + 1];
    }
    state.down[n - 1] = C64::ZERO;
    Ok(())
}

/// The two-sided shift of the standard protocol: up right with
/// `exp(+i theta)`, down left with `exp(-i theta)`. Both boundaries are
/// checked before anything moves, so on error the state is unchanged.
pub fn apply_shift_standard(state: &mut WalkerState, theta: f64) -> WalkResult<()> {
    let n = state.up.len();
    if state.up[n - 1] != C64::ZERO {
        return Err(WalkError::BoundaryOverflow {
            spin: Spin::Up,
            site: state.radius() as i64,
        });
    }
    if state.down[0] != C64::ZERO {
        return Err(WalkError::BoundaryOverflow {
            spin: Spin::Down,
            site: -(state.radius() as i64),
        });
    }
    apply_shift_up(state, theta).expect("edge checked");
    apply_shift_down(state, theta).expect("edge checked");
    Ok(())
}

/// Advance the walker by the single step with index `step_index`.
///
/// The imprinted phase is `spec.phase().step_phase(step_index)` unless
/// `phase_override` supplies the total phase directly (the noise module uses
/// this to add per-step fluctuations). In the split-step protocol both
/// one-sided shifts use the same phase.
///
/// On a boundary-overflow error mid-protocol the state may be left partially
/// stepped; treat it as poisoned.
pub fn step(
    state: &mut WalkerState,
    spec: &ProtocolSpec,
    step_index: i64,
    phase_override: Option<f64>,
) -> WalkResult<()> {
    let theta = phase_override.unwrap_or_else(|| spec.phase.step_phase(step_index));
    match spec.kind {
        ProtocolKind::Standard => {
            apply_coin(state, &spec.coin1);
            apply_shift_standard(state, theta)
        }
        ProtocolKind::SplitStep => {
            apply_coin(state, &spec.coin1);
            apply_shift_up(state, theta)?;
            apply_coin(state, &spec.coin2);
            apply_shift_down(state, theta)
        }
    }
}
