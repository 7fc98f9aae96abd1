use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::binning::integer_log_edges;
use crate::error::{bail, Result};
use crate::hist::CountHistogram;
use crate::numeric::{weighted_line, Line};
use crate::special::ln_gamma;

pub const DEFAULT_HAZARD_FLOOR: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HazardPoint {
    pub x: u64,
    pub hazard: f64,
    /// Users with count `≥ x`.
    pub at_risk: u64,
    /// Users with count exactly `x`.
    pub events: u64,
}

/// `h(x) = freq(x) / #{count ≥ x}` at the observed counts whose risk set
/// holds at least `floor` users.
pub fn hazard_empirical(hist: &CountHistogram, floor: u64) -> Vec<HazardPoint> {
    hist.survivors()
        .into_iter()
        .take_while(|&(_, at_risk)| at_risk >= floor.max(1))
        .map(|(x, at_risk)| {
            let events = hist.frequency(x);
            HazardPoint { x, hazard: events as f64 / at_risk as f64, at_risk, events }
        })
        .collect()
}

/// `Σ_{x=a}^{b} ln x`.
fn ln_sum(a: u64, b: u64) -> f64 {
    if b - a < 16 {
        (a..=b).map(|x| (x as f64).ln()).sum()
    } else {
        ln_gamma(b as f64 + 1.0) - ln_gamma(a as f64)
    }
}

/// Log-log slope of the hazard. Deaths and exposure (user-steps at risk) are
/// pooled in logarithmic bins over every integer whose risk set holds at
/// least `floor` users; each bin contributes `ln(deaths / exposure)` at the
/// exposure-weighted mean of `ln x`, weighted by its deaths.
pub fn hazard_slope(hist: &CountHistogram, bins_per_decade: u32, floor: u64) -> Result<Line> {
    let (Some(min), Some(max)) = (hist.min_count(), hist.max_count()) else {
        bail!(InsufficientData, "empty histogram");
    };
    if min < 1 {
        bail!(Domain, "hazard needs counts of at least 1");
    }
    if bins_per_decade < 1 {
        bail!(InvalidParameter, "bins per decade must be at least 1");
    }
    let edges: Vec<u64> = integer_log_edges(min as f64, max as f64, bins_per_decade).into_iter().map(|e| e as u64).collect();
    let nb = edges.len() - 1;
    let (mut deaths, mut exposure, mut ln_x) = (alloc::vec![0u64; nb], alloc::vec![0f64; nb], alloc::vec![0f64; nb]);
    // spread `S` users at risk over the integers a..=b
    let mut expose = |mut a: u64, b: u64, s: u64| {
        while a <= b {
            let k = edges.partition_point(|&e| e <= a) - 1;
            let hi = b.min(edges[k + 1] - 1);
            exposure[k] += (s * (hi - a + 1)) as f64;
            ln_x[k] += s as f64 * ln_sum(a, hi);
            a = hi + 1;
        }
    };
    let mut prev = min - 1;
    for (x, at_risk) in hist.survivors() {
        if at_risk < floor.max(1) {
            break;
        }
        expose(prev + 1, x, at_risk);
        let k = edges.partition_point(|&e| e <= x) - 1;
        deaths[k] += hist.frequency(x);
        prev = x;
    }
    let (mut pts, mut w) = (Vec::new(), Vec::new());
    for k in 0..nb {
        if deaths[k] > 0 {
            pts.push((ln_x[k] / exposure[k], (deaths[k] as f64 / exposure[k]).ln()));
            w.push(deaths[k] as f64);
        }
    }
    match weighted_line(&pts, &w) {
        Some(l) if pts.len() >= 2 => Ok(l),
        _ => bail!(InsufficientData, "fewer than two hazard bins above the floor"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfit::models::{DiscreteWeibull2, Model};
    use crate::distfit::Sample;
    use crate::hist::HistogramKind;

    #[test]
    fn two_point_hazard() {
        let h = CountHistogram::from_pairs(HistogramKind::Other, [(1, 50), (2, 50)]).unwrap();
        let pts = hazard_empirical(&h, 50);
        assert_eq!(pts.len(), 2);
        assert!((pts[0].hazard - 0.5).abs() < 1e-15 && (pts[1].hazard - 1.0).abs() < 1e-15);
        assert!(hazard_empirical(&h, 51).len() == 1);
    }

    #[test]
    fn geometric_hazard_is_flat() {
        // freq(x) = 2^{60-x}: h(x) = 2^{60-x} / (2^{61-x} - 1), analytically ½ up to 2^{x-61}
        let pairs: Vec<(u64, u64)> = (1..=60).map(|x| (x, 1u64 << (60 - x))).collect();
        let h = CountHistogram::from_pairs(HistogramKind::Other, pairs).unwrap();
        let pts = hazard_empirical(&h, 1 << 20);
        assert_eq!(pts.len(), 40);
        for p in pts {
            let exact = (1u64 << (60 - p.x)) as f64 / ((1u64 << (61 - p.x)) - 1) as f64;
            assert!((p.hazard - exact).abs() < 1e-15 && (p.hazard - 0.5).abs() < 1e-6, "{p:?}");
        }
        assert!(hazard_slope(&h, 10, 1 << 20).unwrap().slope.abs() < 1e-5);
    }

    #[test]
    fn weibull_hazard_slope() {
        let m = DiscreteWeibull2::new(0.4, 0.3).unwrap();
        let mut r = crate::rng::from_seed(21);
        let s = Sample::from_integer_values(&m.sample_n(&mut r, 200_000)).unwrap();
        let line = hazard_slope(&s.to_histogram().unwrap(), 10, 50).unwrap();
        assert!((line.slope + 0.6).abs() < 0.05, "{line:?}");
    }
}
