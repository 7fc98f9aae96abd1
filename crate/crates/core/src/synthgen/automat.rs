use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::rmat::{degree_expectation, RmatParams, RmatShape, DEFAULT_SKEW};
use crate::distfit::binning::integer_log_edges;
use crate::error::{bail, Result};
use crate::hist::CountHistogram;
use crate::numeric::golden_section;
use crate::special::chi2_sf;

const BINS_PER_DECADE: u32 = 10;

/// Degree counts of a graph on `2^n` nodes grouped as `{0}`, logarithmic
/// bins over `1..=k_max`, and a tail `> k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeBins {
    /// Lower edges; bin `b` covers `edges[b]..edges[b + 1]`, the last bin is
    /// open.
    pub edges: Vec<u64>,
    pub observed: Vec<f64>,
}

impl DegreeBins {
    pub fn from_histogram(hist: &CountHistogram, n: u32) -> Result<Self> {
        let nodes = 1u64 << n;
        let positive = hist.total_mass();
        if positive > nodes {
            bail!(InvalidParameter, "histogram holds {positive} nodes, more than 2^{n}");
        }
        let k_max = hist.max_count().unwrap_or(0);
        let mut edges = alloc::vec![0u64, 1];
        if k_max >= 1 {
            let log = integer_log_edges(1.0, k_max as f64, BINS_PER_DECADE);
            edges.extend(log.iter().skip(1).map(|&e| e as u64).filter(|&e| e <= k_max));
            if *edges.last().unwrap() <= k_max {
                edges.push(k_max + 1);
            }
        }
        let mut observed = alloc::vec![0f64; edges.len()];
        observed[0] = (nodes - positive) as f64;
        for (k, f) in hist.iter() {
            let b = edges.partition_point(|&e| e <= k) - 1;
            observed[b] += f as f64;
        }
        Ok(DegreeBins { edges, observed })
    }

    /// Expected counts in the same bins, the open tail taking the remainder.
    pub fn expected(&self, n: u32, edges: u64, p: f64) -> Vec<f64> {
        let nodes = (1u64 << n) as f64;
        let nb = self.edges.len();
        let mut e = alloc::vec![0f64; nb];
        for b in 0..nb - 1 {
            e[b] = (self.edges[b]..self.edges[b + 1]).map(|k| degree_expectation(k, n, edges, p)).sum();
        }
        e[nb - 1] = (nodes - e[..nb - 1].iter().sum::<f64>()).max(0.0);
        e
    }
}

/// `Σ (O − E)² / (E + 1)`.
fn distance(observed: &[f64], expected: &[f64]) -> f64 {
    observed.iter().zip(expected).map(|(o, e)| (o - e) * (o - e) / (e + 1.0)).sum()
}

/// Pearson chi-square of observed bins against the cascade expectation,
/// merging adjacent bins until each holds an expectation of at least 5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

pub fn degree_chi_square(bins: &DegreeBins, n: u32, edges: u64, p: f64) -> Result<DegreeChiSquare> {
    let e = bins.expected(n, edges, p);
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, x) in bins.observed.iter().zip(&e) {
        o_acc += o;
        e_acc += x;
        if e_acc >= 5.0 {
            groups.push((o_acc, e_acc));
            (o_acc, e_acc) = (0.0, 0.0);
        }
    }
    if let Some(last) = groups.last_mut() {
        last.0 += o_acc;
        last.1 += e_acc;
    }
    if groups.len() < 2 {
        bail!(InsufficientData, "fewer than two bins with expectation ≥ 5");
    }
    let statistic: f64 = groups.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = groups.len() - 1;
    Ok(DegreeChiSquare { statistic, dof, p_value: chi2_sf(statistic, dof as f64) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutomatFit {
    /// Top-half probability fitted to the out-degrees.
    pub p: f64,
    /// Left-half probability fitted to the in-degrees.
    pub q: f64,
    pub params: RmatParams,
    /// Set when an end of the search interval `(0.5, 1)` fits as well as the
    /// estimate: the distance there exceeds the minimum by less than the 95%
    /// point of a one-degree chi-square. At 0.5 this means no measurable skew.
    pub p_at_boundary: bool,
    pub q_at_boundary: bool,
    pub converged: bool,
}

const SEARCH: (f64, f64) = (0.5, 0.999);
const CHI2_1_95: f64 = 3.841_458_820_694_124;

fn fit_marginal(hist: &CountHistogram, n: u32, edges: u64) -> Result<(f64, bool, bool)> {
    let bins = DegreeBins::from_histogram(hist, n)?;
    let d = |p| distance(&bins.observed, &bins.expected(n, edges, p));
    let m = golden_section(d, SEARCH.0, SEARCH.1, 1e-5, 200);
    let at_boundary = [SEARCH.0, SEARCH.1].iter().any(|&e| d(e) - m.value < CHI2_1_95);
    Ok((m.x[0], at_boundary, m.converged))
}

/// Cascade marginals fitted to out- and in-degree histograms of a graph on
/// `2^n` nodes with `edges` edges. The joint shape uses
/// [`RmatShape::from_marginals`] with the default skew.
pub fn automat_fit(out_hist: &CountHistogram, in_hist: &CountHistogram, n: u32, edges: u64) -> Result<AutomatFit> {
    if edges == 0 {
        bail!(InsufficientData, "no edges to fit");
    }
    let (p, p_at_boundary, cp) = fit_marginal(out_hist, n, edges)?;
    let (q, q_at_boundary, cq) = fit_marginal(in_hist, n, edges)?;
    let shape = RmatShape::from_marginals(p, q, DEFAULT_SKEW)?;
    Ok(AutomatFit { p, q, params: RmatParams { shape, n, edges }, p_at_boundary, q_at_boundary, converged: cp && cq })
}
