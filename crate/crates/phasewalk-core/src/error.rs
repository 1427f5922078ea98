use thiserror::Error;

/// Errors surfaced by state construction, operators, evolution and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    /// State norm drifted (or was constructed) too far from unity for
    /// probability readouts to be meaningful.
    #[error("state is not normalized: ||psi||^2 = {norm_sqr:.17e}")]
    NotNormalized { norm_sqr: f64 },

    /// A normalization request hit an (almost) zero vector.
    #[error("cannot normalize a zero state: ||psi||^2 = {norm_sqr:.17e}")]
    ZeroNorm { norm_sqr: f64 },

    /// Site index outside the simulation window [-radius, +radius].
    #[error("site {site} outside window of radius {radius}")]
    SiteOutOfWindow { site: i64, radius: usize },

    /// Coin matrix failed the unitarity check.
    #[error("coin matrix is not unitary: max |C^H C - I| entry = {defect:.3e}")]
    NonUnitaryCoin { defect: f64 },

    /// Rational phase factor with a denominator < 1.
    #[error("phase ratio {p}/{q}: denominator must be a positive integer")]
    NonPositiveDenominator { p: i64, q: i64 },

    /// Rational phase factor not in lowest terms.
    #[error("phase ratio {p}/{q} is not reduced (gcd = {gcd}); divide through or use rational_reduced")]
    UnreducedRatio { p: i64, q: i64, gcd: i64 },

    /// A shift would push amplitude across the window boundary.
    #[error("shift would move nonzero amplitude ({spin:?}, site {site}) out of the window; enlarge the radius")]
    BoundaryOverflow { spin: crate::state::Spin, site: i64 },

    /// Window cannot absorb the ballistic light cone of the requested walk.
    #[error("window radius {radius} too small for {n_steps} steps; need radius >= {required}")]
    WindowTooSmall {
        radius: usize,
        n_steps: usize,
        required: usize,
    },

    /// Externally supplied per-step phases do not cover the walk.
    #[error("phase sequence has {actual} entries but the walk takes {expected} steps")]
    PhaseSequenceLength { expected: usize, actual: usize },

    /// Noise amplitude outside [0, 1].
    #[error("noise amplitude epsilon = {epsilon} outside [0, 1]")]
    EpsilonOutOfRange { epsilon: f64 },

    /// Ensembles need at least one run.
    #[error("ensemble must have at least one run")]
    NoRuns,

    /// Revival detection on an empty series.
    #[error("cannot analyze an empty series")]
    EmptySeries,

    /// Revival detection parameters that cannot classify anything.
    #[error("invalid detection parameters: {reason}")]
    InvalidDetectionParams { reason: String },
}

pub type WalkResult<T> = Result<T, WalkError>;
