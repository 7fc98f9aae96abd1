//! Heavy-tailed distribution families, maximum-likelihood fitting, binning,
//! goodness-of-fit tests, hazard analysis, rank correlation and scaling
//! collapse.

pub(crate) mod binning;
mod collapse;
mod fit;
mod gof;
mod hazard;
mod kendall;
mod models;

pub use binning::{equal_count_bin, log_bin, BinnedDensity};
pub use collapse::{scale_collapse, Collapse, ScaledGroup, DEFAULT_MIN_INTERVALS};
pub use fit::{fit_mle, fit_power_law_regression, log_likelihood, Fit, FitOptions};
pub use gof::{g_test, g_test_with_cdf, ks_distance, ks_test, likelihood_ratio, GTest, KsOptions, KsTest, Preference, Vuong};
pub use hazard::{hazard_empirical, hazard_slope, HazardPoint, DEFAULT_HAZARD_FLOOR};
pub use kendall::{kendall_tau, KendallTau};
pub use models::{
    continuized_cdf, DiscretePowerLaw, DiscreteWeibull2, DistributionModel, Dpln, Family, Model, PowerLawExpCutoff,
    PowerLawLognormalCutoff,
};

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};
use crate::hist::{CountHistogram, HistogramKind};
use crate::numeric::CompensatedSum;

/// Observations grouped by value, ascending, with multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sample {
    points: Vec<(f64, u64)>,
    cumulative: Vec<u64>,
    integer: bool,
}

impl Sample {
    fn from_sorted(points: Vec<(f64, u64)>, integer: bool) -> Self {
        let mut acc = 0;
        let cumulative = points
            .iter()
            .map(|&(_, w)| {
                acc += w;
                acc
            })
            .collect();
        Self { points, cumulative, integer }
    }

    /// Integer sample from a count histogram.
    pub fn from_histogram(h: &CountHistogram) -> Self {
        Self::from_sorted(h.iter().map(|(c, f)| (c as f64, f)).collect(), true)
    }

    pub fn from_counts(values: &[u64]) -> Self {
        Self::from_histogram(&CountHistogram::from_values(HistogramKind::Other, values.iter().copied()))
    }

    /// Real-valued sample; values are grouped when exactly equal.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            bail!(Domain, "non-finite observation {v}");
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut points: Vec<(f64, u64)> = Vec::new();
        for v in sorted {
            match points.last_mut() {
                Some(last) if last.0 == v => last.1 += 1,
                _ => points.push((v, 1)),
            }
        }
        Ok(Self::from_sorted(points, false))
    }

    /// Integer-valued draws (as produced by the discrete samplers).
    pub fn from_integer_values(values: &[f64]) -> Result<Self> {
        let mut s = Self::from_values(values)?;
        if s.points.iter().any(|p| p.0.fract() != 0.0 || p.0 < 1.0) {
            bail!(Domain, "integer sample must hold positive whole numbers");
        }
        s.integer = true;
        Ok(s)
    }

    pub fn is_integer(&self) -> bool {
        self.integer
    }

    /// Number of observations.
    pub fn len(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.points.len()
    }

    /// `(value, multiplicity)` ascending.
    pub fn points(&self) -> &[(f64, u64)] {
        &self.points
    }

    pub fn min(&self) -> Option<f64> {
        self.points.first().map(|p| p.0)
    }

    pub fn max(&self) -> Option<f64> {
        self.points.last().map(|p| p.0)
    }

    /// Observations `≥ x`.
    pub fn at_least(&self, x: f64) -> Sample {
        let k = self.points.partition_point(|p| p.0 < x);
        Self::from_sorted(self.points[k..].to_vec(), self.integer)
    }

    /// Observations `≤ x`, as a count.
    pub fn count_at_most(&self, x: f64) -> u64 {
        let k = self.points.partition_point(|p| p.0 <= x);
        if k == 0 {
            0
        } else {
            self.cumulative[k - 1]
        }
    }

    pub fn weighted_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().map(|&(x, w)| w as f64 * f(x)).collect::<CompensatedSum>().value()
    }

    pub fn mean(&self) -> f64 {
        self.weighted_sum(|x| x) / self.len() as f64
    }

    pub fn to_histogram(&self) -> Option<CountHistogram> {
        if !self.integer {
            return None;
        }
        CountHistogram::from_pairs(HistogramKind::Other, self.points.iter().map(|&(x, w)| (x as u64, w))).ok()
    }

    /// Position of the `i`-th observation (0-based) after spreading the
    /// copies of each value: for integer data the `k`-th of `m` copies of
    /// `x` sits at `x + (k + ½)/m`; real values stay where they are.
    pub fn continuized_position(&self, i: u64) -> f64 {
        let k = self.cumulative.partition_point(|&c| c <= i);
        let (x, w) = self.points[k];
        if !self.integer {
            return x;
        }
        let before = if k == 0 { 0 } else { self.cumulative[k - 1] };
        x + ((i - before) as f64 + 0.5) / w as f64
    }

    /// Empirical CDF of the spread-out integer data (plain EDF otherwise).
    pub fn continuized_cdf(&self, t: f64) -> f64 {
        let n = self.len() as f64;
        if !self.integer {
            return self.count_at_most(t) as f64 / n;
        }
        let x = t.floor();
        let below = self.count_at_most(x - 1.0) as f64;
        let here = (self.count_at_most(x) as f64) - below;
        (below + (t - x) * here) / n
    }
}
