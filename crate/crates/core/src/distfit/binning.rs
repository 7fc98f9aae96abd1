use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::Sample;
use crate::error::{bail, Result};

/// Histogram density estimate: bin `b` spans `[edges[b], edges[b + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDensity {
    pub edges: Vec<f64>,
    pub heights: Vec<f64>,
    pub counts: Vec<u64>,
}

impl BinnedDensity {
    pub(crate) fn from_counts(edges: Vec<f64>, counts: Vec<u64>) -> Self {
        let n: u64 = counts.iter().sum();
        let heights = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, e)| if n == 0 { 0.0 } else { c as f64 / n as f64 / (e[1] - e[0]) })
            .collect();
        Self { edges, heights, counts }
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn width(&self, b: usize) -> f64 {
        self.edges[b + 1] - self.edges[b]
    }

    /// Geometric mid-point of bin `b`.
    pub fn center(&self, b: usize) -> f64 {
        (self.edges[b] * self.edges[b + 1]).sqrt()
    }

    /// `Σ height × width`.
    pub fn mass(&self) -> f64 {
        (0..self.len()).map(|b| self.heights[b] * self.width(b)).sum()
    }

    /// Least-squares slope of `ln height` against `ln center` over the
    /// non-empty bins whose centre lies in `[lo, hi]`.
    pub fn log_slope(&self, lo: f64, hi: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = (0..self.len())
            .filter(|&b| self.heights[b] > 0.0 && (lo..=hi).contains(&self.center(b)))
            .map(|b| (self.center(b).ln(), self.heights[b].ln()))
            .collect();
        crate::numeric::line(&pts).map(|l| l.slope)
    }
}

/// Logarithmic bins with edges at `10^{k / bins_per_decade}`. For integer
/// data the edges are rounded up to integers and merged, so each bin is a
/// run of whole numbers and its width is the number of integers it holds.
pub fn log_bin(sample: &Sample, bins_per_decade: u32) -> Result<BinnedDensity> {
    if bins_per_decade < 1 {
        bail!(InvalidParameter, "bins per decade must be at least 1");
    }
    let (Some(min), Some(max)) = (sample.min(), sample.max()) else {
        bail!(InsufficientData, "cannot bin an empty sample");
    };
    if min <= 0.0 {
        bail!(Domain, "logarithmic bins need positive data, got {min}");
    }
    let edges = if sample.is_integer() {
        // the top bin stops at the largest observation
        let mut e = integer_log_edges(min, max, bins_per_decade);
        *e.last_mut().expect("two edges") = max + 1.0;
        e
    } else {
        log_edges(min, max, bins_per_decade)
    };
    let counts = bin_counts(&edges, sample.points().iter().copied());
    Ok(BinnedDensity::from_counts(edges, counts))
}

/// Edges `⌈10^{k/bpd}⌉` with duplicates merged, covering the integers
/// `min..=max`, `1 ≤ min ≤ max`.
pub(crate) fn integer_log_edges(min: f64, max: f64, bins_per_decade: u32) -> Vec<f64> {
    let bpd = f64::from(bins_per_decade);
    let edge = |k: i64| 10f64.powf(k as f64 / bpd).ceil();
    let mut k = (min.log10() * bpd).floor() as i64;
    // rounding must not push the first edge past `min`
    while edge(k) > min {
        k -= 1;
    }
    let mut edges: Vec<f64> = Vec::new();
    loop {
        let e = edge(k);
        if edges.last().map_or(true, |&l| e > l) {
            edges.push(e);
        }
        if e > max {
            return edges;
        }
        k += 1;
    }
}

/// Real-valued edges `10^{k/bpd}` covering `[min, max]`, `0 < min ≤ max`.
pub(crate) fn log_edges(min: f64, max: f64, bins_per_decade: u32) -> Vec<f64> {
    let bpd = f64::from(bins_per_decade);
    let edge = |k: i64| 10f64.powf(k as f64 / bpd);
    let mut k = (min.log10() * bpd).floor() as i64;
    while edge(k) > min {
        k -= 1;
    }
    let mut edges = Vec::new();
    loop {
        let e = edge(k);
        edges.push(e);
        if e > max {
            return edges;
        }
        k += 1;
    }
}

/// Weighted counts per bin; values outside the edges are ignored.
pub(crate) fn bin_counts(edges: &[f64], values: impl Iterator<Item = (f64, u64)>) -> Vec<u64> {
    let mut counts = alloc::vec![0u64; edges.len() - 1];
    for (x, w) in values {
        let b = edges.partition_point(|&e| e <= x);
        if b >= 1 && b < edges.len() {
            counts[b - 1] += w;
        }
    }
    counts
}

/// `bins` bins holding `n / bins` observations each (the last one takes the
/// remainder). Integer data are first spread over `[x, x + 1)`, so ties are
/// split between bins deterministically.
pub fn equal_count_bin(sample: &Sample, bins: u64) -> Result<BinnedDensity> {
    if bins < 1 {
        bail!(InvalidParameter, "need at least one bin");
    }
    let n = sample.len();
    if n < bins {
        bail!(InsufficientData, "{n} observations cannot fill {bins} bins");
    }
    let per = n / bins;
    let (min, max) = (sample.min().unwrap_or(0.0), sample.max().unwrap_or(0.0));
    let mut edges = Vec::with_capacity(bins as usize + 1);
    edges.push(min);
    for b in 1..bins {
        let i = b * per;
        edges.push(0.5 * (sample.continuized_position(i - 1) + sample.continuized_position(i)));
    }
    edges.push(if sample.is_integer() { max + 1.0 } else { max });
    if edges.windows(2).any(|e| !(e[1] > e[0])) {
        bail!(Degenerate, "tied observations leave an equal-count bin with zero width");
    }
    let mut counts = alloc::vec![per; bins as usize];
    counts[bins as usize - 1] = n - per * (bins - 1);
    Ok(BinnedDensity::from_counts(edges, counts))
}
