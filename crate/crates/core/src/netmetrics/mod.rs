//! Structural metrics of directed graphs. Edge weights are ignored except
//! where noted; every edge counts once.

mod clustering;
mod paths;

pub use clustering::{clustering, clustering_estimator, ClusteringReport, TripletStats, TripletType};
pub use paths::{apl_correction, path_length_distribution, AplCorrection, PathLengthDistribution, DEFAULT_APL_FACTOR};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent float methods shadow it whenever std is linked
use num_traits::Float;
use rand::Rng as _;

use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::numeric::CompensatedSum;
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub mean_in: f64,
    pub mean_out: f64,
    /// Population standard deviations.
    pub sd_in: f64,
    pub sd_out: f64,
    /// `(degree, nodes)` ascending, zero degrees included.
    pub in_histogram: Vec<(u64, u64)>,
    pub out_histogram: Vec<(u64, u64)>,
}

fn mean_sd(values: impl Iterator<Item = usize> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().map(|v| v as f64).collect::<CompensatedSum>().value() / n;
    let var = values.map(|v| (v as f64 - mean).powi(2)).collect::<CompensatedSum>().value() / n;
    (mean, var.sqrt())
}

fn degree_histogram(values: impl Iterator<Item = usize>) -> Vec<(u64, u64)> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v as u64).or_insert(0u64) += 1;
    }
    h.into_iter().collect()
}

pub fn degree_stats(g: &WeightedDigraph) -> Result<DegreeStats> {
    let n = g.node_count();
    if n == 0 {
        bail!(InsufficientData, "graph has no nodes");
    }
    let ins = (0..n as NodeId).map(|v| g.in_degree(v));
    let outs = (0..n as NodeId).map(|v| g.out_degree(v));
    let (mean_in, sd_in) = mean_sd(ins.clone());
    let (mean_out, sd_out) = mean_sd(outs.clone());
    Ok(DegreeStats {
        mean_in,
        mean_out,
        sd_in,
        sd_out,
        in_histogram: degree_histogram(ins),
        out_histogram: degree_histogram(outs),
    })
}

/// Fraction of edges `(u, v)` whose reverse `(v, u)` is also present.
pub fn reciprocity(g: &WeightedDigraph) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        bail!(InsufficientData, "graph has no edges");
    }
    let mutual = g.edges().filter(|&(u, v, _)| g.has_edge(v, u)).count();
    Ok(mutual as f64 / m as f64)
}

/// Keep each edge independently with probability `alpha`; weights of kept
/// edges and all nodes are preserved.
pub fn sample_edges(g: &WeightedDigraph, alpha: f64, seed: u64) -> Result<WeightedDigraph> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        bail!(InvalidParameter, "sampling probability must lie in (0, 1], got {alpha}");
    }
    let mut r = rng::stream(seed, "edge-sample", 0);
    Ok(g.filter_edges(|_, _, _| alpha >= 1.0 || r.random::<f64>() < alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeKind {
    In,
    Out,
}

/// Directed degree correlations `r(α, β)` over all edges `i → j`, where the
/// α-degree is taken at the source and the β-degree at the destination.
/// `None` marks a correlation left undefined by a zero variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssortativityReport {
    pub r_in_in: Option<f64>,
    pub r_in_out: Option<f64>,
    pub r_out_in: Option<f64>,
    pub r_out_out: Option<f64>,
}

impl AssortativityReport {
    pub fn get(&self, source: DegreeKind, dest: DegreeKind) -> Option<f64> {
        match (source, dest) {
            (DegreeKind::In, DegreeKind::In) => self.r_in_in,
            (DegreeKind::In, DegreeKind::Out) => self.r_in_out,
            (DegreeKind::Out, DegreeKind::In) => self.r_out_in,
            (DegreeKind::Out, DegreeKind::Out) => self.r_out_out,
        }
    }
}

fn degree(g: &WeightedDigraph, v: NodeId, kind: DegreeKind) -> f64 {
    match kind {
        DegreeKind::In => g.in_degree(v) as f64,
        DegreeKind::Out => g.out_degree(v) as f64,
    }
}

fn edge_pearson(g: &WeightedDigraph, a: DegreeKind, b: DegreeKind) -> Option<f64> {
    let m = g.edge_count() as f64;
    let (mut sx, mut sy) = (CompensatedSum::new(), CompensatedSum::new());
    for (u, v, _) in g.edges() {
        sx.add(degree(g, u, a));
        sy.add(degree(g, v, b));
    }
    let (mx, my) = (sx.value() / m, sy.value() / m);
    let (mut sxy, mut sxx, mut syy) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for (u, v, _) in g.edges() {
        let (dx, dy) = (degree(g, u, a) - mx, degree(g, v, b) - my);
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    if sxx.value() <= 0.0 || syy.value() <= 0.0 {
        return None;
    }
    Some((sxy.value() / (sxx.value() * syy.value()).sqrt()).clamp(-1.0, 1.0))
}

pub fn assortativity(g: &WeightedDigraph) -> Result<AssortativityReport> {
    if g.edge_count() < 2 {
        bail!(InsufficientData, "assortativity needs at least two edges");
    }
    use DegreeKind::{In, Out};
    Ok(AssortativityReport {
        r_in_in: edge_pearson(g, In, In),
        r_in_out: edge_pearson(g, In, Out),
        r_out_in: edge_pearson(g, Out, In),
        r_out_out: edge_pearson(g, Out, Out),
    })
}
