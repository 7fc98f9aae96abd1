use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng as _;

use super::evaluate::{train_evaluate, RocPoint};
use super::features::{bfs_distances, labelled_features};
use crate::error::{bail, Result};
use crate::graph::NodeId;
use crate::rng;
use crate::synthgen::{spam_graph_generate, NodeClass, SpamGraph, SpamGraphSpec};

/// Fraction of `pairs` random ordered pairs of distinct benign nodes joined
/// by a directed path in the graph generated from `spec`.
pub fn connectivity_fraction(spec: &SpamGraphSpec, pairs: usize, seed: u64) -> Result<f64> {
    if pairs < 100 {
        bail!(InvalidParameter, "need at least 100 pairs, got {pairs}");
    }
    let sg = spam_graph_generate(spec)?;
    let benign = benign_nodes(&sg);
    if benign.len() < 2 {
        bail!(InsufficientData, "fewer than two benign nodes");
    }
    let mut r = rng::stream(seed, "pairs", 0);
    let mut connected = 0usize;
    for _ in 0..pairs {
        let a = benign[r.random_range(0..benign.len())];
        let b = loop {
            let b = benign[r.random_range(0..benign.len())];
            if b != a {
                break b;
            }
        };
        connected += usize::from(bfs_distances(&sg.graph, a)[b as usize].is_some());
    }
    Ok(connected as f64 / pairs as f64)
}

fn benign_nodes(sg: &SpamGraph) -> Vec<NodeId> {
    (0..sg.graph.node_count() as NodeId).filter(|&v| !sg.is_spam(v)).collect()
}

/// Uniform benign node with positive out-degree.
pub fn pick_root(sg: &SpamGraph, seed: u64) -> Result<NodeId> {
    let candidates: Vec<NodeId> = benign_nodes(sg).into_iter().filter(|&v| sg.graph.out_degree(v) > 0).collect();
    if candidates.is_empty() {
        bail!(Degenerate, "no benign node has an outgoing edge");
    }
    let mut r = rng::stream(seed, "root", 0);
    Ok(candidates[r.random_range(0..candidates.len())])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub benign_density: f64,
    pub bs_rate: f64,
    /// Rates at the ROC knee.
    pub tpr: f64,
    pub fpr: f64,
    /// Spam probability cut at the knee.
    pub threshold: f64,
    pub n_nodes: usize,
    pub seed: u64,
    pub root: NodeId,
    /// Cross-validated rates of the tree's own majority-class prediction.
    pub cv_tpr: f64,
    pub cv_fpr: f64,
    pub roc: Vec<RocPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCell {
    pub benign_density: f64,
    pub bs_rate: f64,
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub results: Vec<SweepResult>,
    pub skipped: Vec<SkippedCell>,
}

pub const CV_FOLDS: usize = 10;

/// One grid cell: generate, root, extract features for every other node,
/// cross-validate.
pub fn sweep_cell(benign_density: f64, bs_rate: f64, n: u32, seed: u64) -> Result<SweepResult> {
    let spec = SpamGraphSpec::new(n, benign_density, bs_rate, seed);
    let sg = spam_graph_generate(&spec)?;
    let root = pick_root(&sg, seed)?;
    let features = labelled_features(&sg.graph, &sg.labels, root)?;
    let e = train_evaluate(&features, CV_FOLDS, seed)?;
    let k = e.knee();
    Ok(SweepResult {
        benign_density,
        bs_rate,
        tpr: k.tpr,
        fpr: k.fpr,
        threshold: k.threshold,
        n_nodes: spec.nodes(),
        seed,
        root,
        cv_tpr: e.tpr,
        cv_fpr: e.fpr,
        roc: e.roc,
    })
}

/// Every `(density, bs_rate, seed)` combination in grid order. Cells whose
/// graphs are degenerate (no usable root, a single class, too few nodes)
/// are listed in [`SweepReport::skipped`]; invalid parameters are errors.
pub fn sweep(densities: &[f64], bs_rates: &[f64], n: u32, seeds: &[u64]) -> Result<SweepReport> {
    if densities.is_empty() || bs_rates.is_empty() || seeds.is_empty() {
        bail!(InvalidParameter, "empty sweep grid");
    }
    for &d in densities {
        for &b in bs_rates {
            SpamGraphSpec::new(n, d, b, 0).validate()?;
        }
    }
    let mut report = SweepReport::default();
    for &d in densities {
        for &b in bs_rates {
            for &seed in seeds {
                match sweep_cell(d, b, n, seed) {
                    Ok(r) => report.results.push(r),
                    Err(e @ (crate::Error::Degenerate(_) | crate::Error::InsufficientData(_) | crate::Error::Capacity(_))) => {
                        report.skipped.push(SkippedCell { benign_density: d, bs_rate: b, seed, reason: e.to_string() })
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

pub fn class_counts(labels: &[NodeClass]) -> (usize, usize) {
    let spam = labels.iter().filter(|&&l| l == NodeClass::Spam).count();
    (labels.len() - spam, spam)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connectivity_extremes() {
        let full = SpamGraphSpec::new(7, 1.0, 0.5, 1);
        assert_eq!(connectivity_fraction(&full, 200, 2).unwrap(), 1.0);
        let empty = SpamGraphSpec::new(7, 0.0, 0.5, 1);
        assert_eq!(connectivity_fraction(&empty, 200, 2).unwrap(), 0.0);
        assert!(connectivity_fraction(&full, 99, 2).is_err());
    }

    #[test]
    fn connectivity_grows_with_density() {
        let f = |d| connectivity_fraction(&SpamGraphSpec::new(9, d, 0.1, 3), 400, 4).unwrap();
        let (lo, hi) = (f(0.002), f(0.05));
        assert!(lo < hi, "{lo} {hi}");
    }

    #[test]
    fn root_is_a_benign_retweeter() {
        let sg = spam_graph_generate(&SpamGraphSpec::new(9, 0.01, 0.1, 5)).unwrap();
        for seed in 0..20 {
            let r = pick_root(&sg, seed).unwrap();
            assert!(!sg.is_spam(r) && sg.graph.out_degree(r) > 0);
        }
    }

    #[test]
    fn small_cell_and_skips() {
        let r = sweep_cell(0.02, 0.1, 9, 1).unwrap();
        assert!((0.0..=1.0).contains(&r.tpr) && (0.0..=1.0).contains(&r.fpr));
        assert_eq!(r.n_nodes, 512);
        assert_eq!(r, sweep_cell(0.02, 0.1, 9, 1).unwrap());
        // no benign edges leaves no root to start from
        let rep = sweep(&[0.0, 0.02], &[0.0], 9, &[1]).unwrap();
        assert_eq!(rep.skipped.len(), 1);
        assert_eq!(rep.results.len(), 1);
        assert!(sweep(&[2.0], &[0.1], 9, &[1]).is_err());
    }
}
