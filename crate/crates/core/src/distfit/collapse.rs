use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::binning::{bin_counts, log_edges, BinnedDensity};
use crate::error::{bail, Result};
use crate::ingest::IntervalSeries;

pub const DEFAULT_MIN_INTERVALS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledGroup {
    pub lower: u64,
    pub upper: u64,
    /// Group mean `ΔT_a` used as the scale.
    pub mean: f64,
    /// Density of `ΔT / ΔT_a` over the positive intervals, on bins shared by
    /// every group.
    pub density: BinnedDensity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Collapse {
    pub groups: Vec<ScaledGroup>,
    /// Largest L1 distance between two group densities, summed over the
    /// bins where both are non-zero.
    pub metric: f64,
}

/// Rescale each group's intervals by its mean and compare the densities on
/// common logarithmic bins. Zero intervals count towards the mean but
/// cannot be placed on a log axis and are left out of the densities.
pub fn scale_collapse(series: &IntervalSeries, bins_per_decade: u32, min_intervals: usize) -> Result<Collapse> {
    if bins_per_decade < 1 {
        bail!(InvalidParameter, "bins per decade must be at least 1");
    }
    if series.groups.is_empty() {
        bail!(InsufficientData, "no interval groups");
    }
    let mut scaled = Vec::with_capacity(series.groups.len());
    for g in &series.groups {
        if g.intervals.len() < min_intervals {
            bail!(
                InsufficientData,
                "group [{}, {}] has {} intervals, need {min_intervals}",
                g.lower,
                g.upper,
                g.intervals.len()
            );
        }
        let mean = g.intervals.iter().map(|&v| v as f64).sum::<f64>() / g.intervals.len() as f64;
        if !(mean > 0.0) {
            bail!(Degenerate, "group [{}, {}] has only zero intervals", g.lower, g.upper);
        }
        let values: Vec<f64> = g.intervals.iter().filter(|&&v| v > 0).map(|&v| v as f64 / mean).collect();
        scaled.push((g, mean, values));
    }
    let lo = scaled.iter().flat_map(|s| s.2.iter().copied()).fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().flat_map(|s| s.2.iter().copied()).fold(0.0, f64::max);
    let edges = log_edges(lo, hi, bins_per_decade);
    let groups: Vec<ScaledGroup> = scaled
        .into_iter()
        .map(|(g, mean, values)| {
            let counts = bin_counts(&edges, values.iter().map(|&v| (v, 1)));
            ScaledGroup { lower: g.lower, upper: g.upper, mean, density: BinnedDensity::from_counts(edges.clone(), counts) }
        })
        .collect();
    let mut metric: f64 = 0.0;
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let (a, b) = (&groups[i].density, &groups[j].density);
            let d: f64 = (0..a.len())
                .filter(|&k| a.heights[k] > 0.0 && b.heights[k] > 0.0)
                .map(|k| (a.heights[k] - b.heights[k]).abs() * a.width(k))
                .sum();
            metric = metric.max(d);
        }
    }
    Ok(Collapse { groups, metric })
}
