use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};
use crate::special::norm_quantile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeOptions {
    /// Confidence level of the pessimistic error estimate used in pruning.
    pub confidence: f64,
    /// Fewest training rows in any leaf.
    pub min_leaf: usize,
    pub max_depth: usize,
    pub prune: bool,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions { confidence: 0.25, min_leaf: 2, max_depth: 32, prune: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        /// Training rows `[negative, positive]` that reached the leaf.
        counts: [u32; 2],
    },
    Split {
        attribute: usize,
        /// Rows with `x[attribute] <= threshold` go left.
        threshold: f64,
        left: usize,
        right: usize,
        counts: [u32; 2],
    },
}

impl TreeNode {
    fn counts(&self) -> [u32; 2] {
        match *self {
            TreeNode::Leaf { counts } | TreeNode::Split { counts, .. } => counts,
        }
    }
}

/// Binary C4.5 tree over numeric attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    /// Node 0 is the root.
    pub nodes: Vec<TreeNode>,
    pub attributes: usize,
}

fn entropy(c: [f64; 2]) -> f64 {
    let n = c[0] + c[1];
    c.iter().filter(|&&x| x > 0.0).map(|&x| -(x / n) * (x / n).log2()).sum()
}

/// Upper confidence bound on the error count of a leaf with `e` errors out
/// of `n`, minus `e`, as in C4.5.
fn added_errors(n: f64, e: f64, cf: f64) -> f64 {
    if e < 1.0 {
        let base = n * (1.0 - cf.powf(1.0 / n));
        return if e == 0.0 { base } else { base + e * (added_errors(n, 1.0, cf) - base) };
    }
    if e + 0.5 >= n {
        return (n - e).max(0.0);
    }
    let z = norm_quantile(1.0 - cf);
    let f = (e + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt()) / (1.0 + z * z / n);
    r * n - e
}

struct Split {
    attribute: usize,
    threshold: f64,
    gain: f64,
    ratio: f64,
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [bool],
    opts: TreeOptions,
    nodes: Vec<TreeNode>,
}

impl Builder<'_> {
    fn counts(&self, rows: &[usize]) -> [u32; 2] {
        let pos = rows.iter().filter(|&&r| self.y[r]).count() as u32;
        [rows.len() as u32 - pos, pos]
    }

    /// Best threshold on one attribute: information gain with the penalty
    /// `log₂(candidates) / n` for choosing among cut points.
    fn best_threshold(&self, rows: &mut [usize], attribute: usize) -> Option<Split> {
        let n = rows.len() as f64;
        let total = self.counts(rows).map(f64::from);
        let min_split = (0.1 * n / 2.0).clamp(self.opts.min_leaf as f64, 25.0).max(self.opts.min_leaf as f64);
        rows.sort_unstable_by(|&a, &b| self.x[a][attribute].total_cmp(&self.x[b][attribute]));
        let base = entropy(total);
        let mut left = [0.0f64; 2];
        let mut best: Option<(f64, usize)> = None;
        let mut candidates = 0usize;
        for i in 0..rows.len() - 1 {
            left[usize::from(self.y[rows[i]])] += 1.0;
            let (v, next) = (self.x[rows[i]][attribute], self.x[rows[i + 1]][attribute]);
            if v == next {
                continue;
            }
            let nl = (i + 1) as f64;
            if nl < min_split || n - nl < min_split {
                continue;
            }
            candidates += 1;
            let right = [total[0] - left[0], total[1] - left[1]];
            let gain = base - (nl / n) * entropy(left) - ((n - nl) / n) * entropy(right);
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, i));
            }
        }
        let (gain, i) = best?;
        let gain = gain - (candidates as f64).log2() / n;
        if gain <= 0.0 {
            return None;
        }
        let nl = (i + 1) as f64;
        let split_info = entropy([nl, n - nl]);
        let threshold = (self.x[rows[i]][attribute] + self.x[rows[i + 1]][attribute]) / 2.0;
        Some(Split { attribute, threshold, gain, ratio: gain / split_info })
    }

    fn build(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let counts = self.counts(rows);
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { counts });
        if counts[0] == 0 || counts[1] == 0 || rows.len() < 2 * self.opts.min_leaf || depth >= self.opts.max_depth {
            return id;
        }
        let splits: Vec<Split> = (0..self.x[rows[0]].len()).filter_map(|a| self.best_threshold(rows, a)).collect();
        if splits.is_empty() {
            return id;
        }
        // highest gain ratio among the splits with at least average gain
        let mean_gain = splits.iter().map(|s| s.gain).sum::<f64>() / splits.len() as f64;
        let chosen = splits
            .iter()
            .filter(|s| s.gain >= mean_gain - 1e-3)
            .max_by(|a, b| a.ratio.total_cmp(&b.ratio).then(b.attribute.cmp(&a.attribute)))
            .unwrap();
        let (attribute, threshold) = (chosen.attribute, chosen.threshold);
        rows.sort_unstable_by(|&a, &b| self.x[a][attribute].total_cmp(&self.x[b][attribute]));
        let cut = rows.partition_point(|&r| self.x[r][attribute] <= threshold);
        let (l, r) = rows.split_at_mut(cut);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id] = TreeNode::Split { attribute, threshold, left, right, counts };
        id
    }

    /// Bottom-up subtree replacement; returns the pessimistic error of the
    /// (possibly collapsed) subtree.
    fn prune(&mut self, id: usize) -> f64 {
        let counts = self.nodes[id].counts();
        let n = f64::from(counts[0] + counts[1]);
        let e = f64::from(counts[0].min(counts[1]));
        let as_leaf = e + added_errors(n, e, self.opts.confidence);
        match self.nodes[id] {
            TreeNode::Leaf { .. } => as_leaf,
            TreeNode::Split { left, right, .. } => {
                let subtree = self.prune(left) + self.prune(right);
                if as_leaf <= subtree + 0.1 {
                    self.nodes[id] = TreeNode::Leaf { counts };
                    as_leaf
                } else {
                    subtree
                }
            }
        }
    }
}

impl DecisionTree {
    /// Fits to rows `x` with binary labels `y` (`true` is the positive class).
    pub fn fit(x: &[Vec<f64>], y: &[bool], opts: TreeOptions) -> Result<Self> {
        if x.len() != y.len() {
            bail!(InvalidParameter, "{} rows but {} labels", x.len(), y.len());
        }
        if x.is_empty() {
            bail!(InsufficientData, "no training rows");
        }
        let attributes = x[0].len();
        if x.iter().any(|r| r.len() != attributes || r.iter().any(|v| !v.is_finite())) {
            bail!(InvalidParameter, "rows must share one length and hold finite values");
        }
        if opts.min_leaf < 1 || !(opts.confidence > 0.0 && opts.confidence < 1.0) {
            bail!(InvalidParameter, "min leaf must be ≥ 1 and confidence in (0, 1)");
        }
        let mut b = Builder { x, y, opts, nodes: Vec::new() };
        let mut rows: Vec<usize> = (0..x.len()).collect();
        b.build(&mut rows, 0);
        if opts.prune {
            b.prune(0);
        }
        Ok(DecisionTree { nodes: compact(b.nodes), attributes })
    }

    fn leaf(&self, x: &[f64]) -> [u32; 2] {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                TreeNode::Leaf { counts } => return counts,
                TreeNode::Split { attribute, threshold, left, right, .. } => {
                    id = if x[attribute] <= threshold { left } else { right };
                }
            }
        }
    }

    /// Fraction of positive training rows in the leaf reached by `x`.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let c = self.leaf(x);
        f64::from(c[1]) / f64::from(c[0] + c[1])
    }

    /// Majority class of the leaf, ties going to the negative class.
    pub fn predict(&self, x: &[f64]) -> bool {
        let c = self.leaf(x);
        c[1] > c[0]
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &DecisionTree, id: usize) -> usize {
            match t.nodes[id] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(t, left).max(walk(t, right)),
            }
        }
        walk(self, 0)
    }

    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }
}

/// Drops nodes orphaned by pruning and renumbers the rest.
fn compact(nodes: Vec<TreeNode>) -> Vec<TreeNode> {
    fn copy(src: &[TreeNode], id: usize, out: &mut Vec<TreeNode>) -> usize {
        let new = out.len();
        out.push(src[id].clone());
        if let TreeNode::Split { left, right, .. } = src[id] {
            let l = copy(src, left, out);
            let r = copy(src, right, out);
            if let TreeNode::Split { left, right, .. } = &mut out[new] {
                (*left, *right) = (l, r);
            }
        }
        new
    }
    let mut out = Vec::with_capacity(nodes.len());
    copy(&nodes, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::Rng as _;

    #[test]
    fn added_errors_reference_values() {
        // C4.5's estimate for a pure leaf of 6 rows at CF 0.25: 6(1 - 0.25^{1/6})
        assert!((added_errors(6.0, 0.0, 0.25) - 6.0 * (1.0 - 0.25f64.powf(1.0 / 6.0))).abs() < 1e-12);
        // the normal-approximation branch is an upper bound above the raw error
        let a = added_errors(100.0, 10.0, 0.25);
        assert!(a > 0.0 && a < 10.0);
        assert_eq!(added_errors(3.0, 3.0, 0.25), 0.0);
    }

    #[test]
    fn separable_threshold() {
        let x: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64, (i % 7) as f64]).collect();
        let y: Vec<bool> = (0..100).map(|i| i >= 37).collect();
        let t = DecisionTree::fit(&x, &y, TreeOptions::default()).unwrap();
        assert_eq!(t.leaves(), 2);
        match t.nodes[0] {
            TreeNode::Split { attribute, threshold, .. } => assert_eq!((attribute, threshold), (0, 36.5)),
            _ => panic!("no split"),
        }
        assert!(x.iter().zip(&y).all(|(r, &l)| t.predict(r) == l));
    }

    #[test]
    fn corner_region_needs_two_splits() {
        let mut r = crate::rng::from_seed(1);
        let x: Vec<Vec<f64>> = (0..400).map(|_| vec![r.random::<f64>(), r.random::<f64>()]).collect();
        let y: Vec<bool> = x.iter().map(|p| p[0] > 0.3 && p[1] > 0.6).collect();
        let t = DecisionTree::fit(&x, &y, TreeOptions::default()).unwrap();
        let acc = x.iter().zip(&y).filter(|(p, &l)| t.predict(p) == l).count();
        assert!(acc >= 390, "{acc}");
        assert!(t.depth() >= 2);
    }

    #[test]
    fn label_noise_is_pruned_away() {
        let mut r = crate::rng::from_seed(2);
        let x: Vec<Vec<f64>> =
            (0..2000).map(|_| vec![r.random_range(0..30) as f64, r.random_range(0..30) as f64]).collect();
        let y: Vec<bool> = x.iter().map(|p| (p[0] + p[1] > 30.0) ^ (r.random::<f64>() < 0.15)).collect();
        let fit = |confidence, prune| DecisionTree::fit(&x, &y, TreeOptions { confidence, prune, ..TreeOptions::default() }).unwrap();
        let full = fit(0.25, false);
        let (strict, pruned) = (fit(0.01, true), fit(0.25, true));
        assert!(strict.leaves() <= pruned.leaves() && pruned.leaves() < full.leaves(), "{} {} {}", strict.leaves(), pruned.leaves(), full.leaves());
        for n in &full.nodes {
            let c = n.counts();
            assert!(c[0] + c[1] >= 2);
        }
    }

    #[test]
    fn depth_limit_and_bad_input() {
        let x: Vec<Vec<f64>> = (0..64).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..64).map(|i| i % 2 == 0).collect();
        let t = DecisionTree::fit(&x, &y, TreeOptions { max_depth: 3, prune: false, ..TreeOptions::default() }).unwrap();
        assert!(t.depth() <= 3);
        assert!(DecisionTree::fit(&x, &y[..3], TreeOptions::default()).is_err());
        assert!(DecisionTree::fit(&[vec![f64::NAN]], &[true], TreeOptions::default()).is_err());
    }
}
