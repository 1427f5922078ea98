//! Observables of states and distributions, and revival detection on
//! return-probability series.

use serde::{Deserialize, Serialize};

use crate::error::{WalkError, WalkResult};
use crate::evolution::Trajectory;
use crate::state::{Distribution, Spin, WalkerState};

/// Probability of finding the walker at `site`, regardless of spin.
/// Bit-identical to `position_distribution()[site]`.
pub fn return_probability(state: &WalkerState, site: i64) -> WalkResult<f64> {
    if state.index(site).is_none() {
        return Err(WalkError::SiteOutOfWindow {
            site,
            radius: state.radius(),
        });
    }
    let u = state.amplitude(Spin::Up, site);
    let d = state.amplitude(Spin::Down, site);
    Ok(u.norm_sqr() + d.norm_sqr())
}

/// Position expectation value `<x> = sum_x x P(x)`.
pub fn mean_position(dist: &Distribution) -> f64 {
    dist.site_probabilities()
        .map(|(x, p)| x as f64 * p)
        .sum()
}

/// Position standard deviation `sqrt(<x^2> - <x>^2)` (clamped at zero
/// against rounding).
pub fn std_dev(dist: &Distribution) -> f64 {
    let m1 = mean_position(dist);
    let m2: f64 = dist
        .site_probabilities()
        .map(|(x, p)| (x * x) as f64 * p)
        .sum();
    (m2 - m1 * m1).max(0.0).sqrt()
}

/// Largest standard deviation reached anywhere along a trajectory.
pub fn max_excursion(traj: &Trajectory) -> f64 {
    traj.std_dev.iter().copied().fold(0.0, f64::max)
}

/// Minimum of `series[stride], series[2 * stride], ...` — the series minimum
/// restricted to the steps a strided detector looks at, skipping the trivial
/// initial entry. `None` when no such entries exist (or `stride == 0`).
pub fn strided_min(series: &[f64], stride: usize) -> Option<f64> {
    if stride == 0 {
        return None;
    }
    let mut values = (stride..series.len()).step_by(stride).map(|i| series[i]);
    values.next().map(|first| values.fold(first, f64::min))
}

/// Knobs for [`detect_revivals`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionParams {
    /// A peak within `complete_tol` of 1 counts as a complete revival.
    pub complete_tol: f64,
    /// Peaks below this are ignored entirely.
    pub partial_threshold: f64,
    /// Candidate peaks dominate all examined steps within this distance;
    /// competing peaks closer than this collapse onto the strongest.
    pub min_separation: usize,
    /// Examine only steps at multiples of `stride`. The standard protocol
    /// puts zero probability on the origin at every odd step, so its series
    /// are analyzed with `stride = 2`.
    pub stride: usize,
    /// Values within `tie_tol` of each other are treated as one plateau and
    /// reported at the plateau's midpoint step. Revivals around odd
    /// multiples of half the period produce exactly tied neighbors, e.g.
    /// P(48) = P(50) for a 98-step revival cycle, which this reports as a
    /// single event at step 49.
    pub tie_tol: f64,
}

impl Default for DetectionParams {
    fn default() -> Self {
        Self {
            complete_tol: 1e-6,
            partial_threshold: 0.3,
            min_separation: 5,
            stride: 1,
            tie_tol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RevivalKind {
    Complete,
    Partial,
}

/// One detected revival: the (possibly plateau-midpoint) step, the peak
/// value, and its classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevivalEvent {
    pub step: usize,
    pub peak: f64,
    pub kind: RevivalKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct RevivalReport {
    pub events: Vec<RevivalEvent>,
    /// Set when at least two events are found and their spacings agree
    /// within one step; the rounded mean spacing.
    pub inferred_period: Option<usize>,
}

impl DetectionParams {
    /// Reject parameter combinations the detector cannot run with.
    pub fn validate(&self) -> WalkResult<()> {
        let fail = |reason: &str| {
            Err(WalkError::InvalidDetectionParams {
                reason: reason.to_owned(),
            })
        };
        if self.stride == 0 {
            return fail("stride must be >= 1");
        }
        if self.min_separation == 0 {
            return fail("min_separation must be >= 1");
        }
        if !(0.0..1.0).contains(&self.complete_tol) {
            return fail("complete_tol must be in [0, 1)");
        }
        if !(self.partial_threshold > 0.0 && self.partial_threshold <= 1.0) {
            return fail("partial_threshold must be in (0, 1]");
        }
        if !(self.tie_tol.is_finite() && self.tie_tol >= 0.0) {
            return fail("tie_tol must be finite and >= 0");
        }
        Ok(())
    }
}

/// Find revival events in a return-probability series (index = step).
///
/// The series is scanned at steps that are multiples of `stride` (step 0,
/// the trivial initial unit, is never itself an event but does compete as a
/// neighbor). Runs of adjacent examined steps whose values agree within
/// `tie_tol` form a plateau; a plateau becomes an event when every other
/// examined step within `min_separation` of it falls strictly below the
/// plateau. Events report the plateau midpoint and peak value.
pub fn detect_revivals(series: &[f64], params: &DetectionParams) -> WalkResult<RevivalReport> {
    if series.is_empty() {
        return Err(WalkError::EmptySeries);
    }
    params.validate()?;
    let stride = params.stride;
    let candidates: Vec<usize> = (1..)
        .map(|j| j * stride)
        .take_while(|&s| s < series.len())
        .collect();

    let mut events = Vec::new();
    let mut i = 0;
    while i < candidates.len() {
        let mut j = i;
        let mut vmax = series[candidates[i]];
        let mut vmin = vmax;
        while j + 1 < candidates.len() {
            let v = series[candidates[j + 1]];
            if (v - vmax).abs() <= params.tie_tol && (v - vmin).abs() <= params.tie_tol {
                vmax = vmax.max(v);
                vmin = vmin.min(v);
                j += 1;
            } else {
                break;
            }
        }
        let first = candidates[i];
        let last = candidates[j];
        if vmax >= params.partial_threshold {
            let lo = first.saturating_sub(params.min_separation);
            let hi = (last + params.min_separation).min(series.len() - 1);
            let mut dominated = true;
            // Examined steps in [lo, hi]: multiples of stride, including 0.
            let mut m = lo.div_ceil(stride) * stride;
            while m <= hi {
                let in_plateau = (first..=last).contains(&m);
                if !in_plateau && series[m] >= vmin - params.tie_tol {
                    dominated = false;
                    break;
                }
                m += stride;
            }
            if dominated {
                events.push(RevivalEvent {
                    step: (first + last) / 2,
                    peak: vmax,
                    kind: if vmax >= 1.0 - params.complete_tol {
                        RevivalKind::Complete
                    } else {
                        RevivalKind::Partial
                    },
                });
            }
        }
        i = j + 1;
    }

    let inferred_period = if events.len() >= 2 {
        let diffs: Vec<usize> = events.windows(2).map(|w| w[1].step - w[0].step).collect();
        let lo = *diffs.iter().min().expect("nonempty");
        let hi = *diffs.iter().max().expect("nonempty");
        if hi - lo <= 1 {
            let sum: usize = diffs.iter().sum();
            Some((sum + diffs.len() / 2) / diffs.len())
        } else {
            None
        }
    } else {
        None
    };

    Ok(RevivalReport {
        events,
        inferred_period,
    })
}
