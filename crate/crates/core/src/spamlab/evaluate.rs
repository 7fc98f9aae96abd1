use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::features::FeatureVector;
use super::tree::{DecisionTree, TreeOptions};
use crate::error::{bail, Result};
use crate::rng;
use crate::synthgen::NodeClass;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    /// Nodes scoring at least this are called spam.
    pub threshold: f64,
    pub tpr: f64,
    pub fpr: f64,
}

/// Decision tree over `(distance, max_flow)` with spam as the positive class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    pub tree: DecisionTree,
    /// Distance code standing in for "unreachable": one past the largest
    /// finite distance seen in training.
    pub unreachable_distance: f64,
    pub folds: usize,
    pub seed: u64,
}

impl ClassifierModel {
    pub fn spam_probability(&self, distance: Option<u32>, max_flow: u32) -> f64 {
        let d = distance.map_or(self.unreachable_distance, f64::from);
        self.tree.predict_proba(&[d, f64::from(max_flow)])
    }

    pub fn classify(&self, distance: Option<u32>, max_flow: u32) -> NodeClass {
        let d = distance.map_or(self.unreachable_distance, f64::from);
        if self.tree.predict(&[d, f64::from(max_flow)]) {
            NodeClass::Spam
        } else {
            NodeClass::Benign
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Trained on every row.
    pub model: ClassifierModel,
    /// Cross-validated rates of the majority-class prediction, pooled over
    /// folds.
    pub tpr: f64,
    pub fpr: f64,
    /// From the out-of-fold spam probabilities, ascending in both rates,
    /// from `(0, 0)` to `(1, 1)`.
    pub roc: Vec<RocPoint>,
}

impl Evaluation {
    /// The ROC point maximising `tpr − fpr`, ties going to the lower `fpr`.
    pub fn knee(&self) -> RocPoint {
        knee(&self.roc)
    }
}

pub fn knee(roc: &[RocPoint]) -> RocPoint {
    let mut best = roc[0];
    for &p in &roc[1..] {
        let (j, b) = (p.tpr - p.fpr, best.tpr - best.fpr);
        if j > b || (j == b && p.fpr < best.fpr) {
            best = p;
        }
    }
    best
}

/// Fold of each row: every class is shuffled and dealt round-robin, so fold
/// sizes differ by at most one within each class.
pub fn stratified_folds(labels: &[bool], folds: usize, seed: u64) -> Vec<usize> {
    let mut r = rng::stream(seed, "cv-folds", 0);
    let mut fold = vec![0usize; labels.len()];
    let mut next = 0;
    for class in [false, true] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut r);
        for i in idx {
            fold[i] = next;
            next = (next + 1) % folds;
        }
    }
    fold
}

/// Thresholds at every distinct score, highest first.
pub fn roc_curve(scores: &[f64], positive: &[bool]) -> Vec<RocPoint> {
    let p = positive.iter().filter(|&&x| x).count() as f64;
    let n = positive.len() as f64 - p;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut roc = vec![RocPoint { threshold: f64::INFINITY, tpr: 0.0, fpr: 0.0 }];
    let (mut tp, mut fp) = (0.0, 0.0);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if positive[order[i]] {
                tp += 1.0;
            } else {
                fp += 1.0;
            }
            i += 1;
        }
        roc.push(RocPoint { threshold: s, tpr: tp / p, fpr: fp / n });
    }
    roc
}

fn encode(features: &[FeatureVector]) -> (Vec<Vec<f64>>, f64) {
    let unreachable = features.iter().filter_map(|f| f.distance).max().map_or(1.0, |d| f64::from(d) + 1.0);
    let x = features
        .iter()
        .map(|f| vec![f.distance.map_or(unreachable, f64::from), f64::from(f.max_flow)])
        .collect();
    (x, unreachable)
}

/// Stratified `folds`-fold cross-validation of a C4.5 tree with the default
/// options, then a final fit on all rows.
pub fn train_evaluate(features: &[FeatureVector], folds: usize, seed: u64) -> Result<Evaluation> {
    train_evaluate_with(features, folds, seed, TreeOptions::default())
}

pub fn train_evaluate_with(features: &[FeatureVector], folds: usize, seed: u64, opts: TreeOptions) -> Result<Evaluation> {
    if folds < 2 {
        bail!(InvalidParameter, "need at least two folds, got {folds}");
    }
    if features.len() < 10 * folds {
        bail!(InsufficientData, "{} rows for {folds} folds; need at least {}", features.len(), 10 * folds);
    }
    let mut y = Vec::with_capacity(features.len());
    for f in features {
        match f.label {
            Some(c) => y.push(c == NodeClass::Spam),
            None => bail!(InvalidParameter, "node {} has no label", f.node),
        }
    }
    let spam = y.iter().filter(|&&s| s).count();
    if spam == 0 || spam == y.len() {
        bail!(Degenerate, "only one class present");
    }
    let (x, unreachable) = encode(features);
    let fold = stratified_folds(&y, folds, seed);
    let mut scores = vec![0.0; x.len()];
    let (mut tp, mut fp) = (0usize, 0usize);
    for k in 0..folds {
        let (mut tx, mut ty) = (Vec::new(), Vec::new());
        for i in (0..x.len()).filter(|&i| fold[i] != k) {
            tx.push(x[i].clone());
            ty.push(y[i]);
        }
        let tree = DecisionTree::fit(&tx, &ty, opts)?;
        for i in (0..x.len()).filter(|&i| fold[i] == k) {
            scores[i] = tree.predict_proba(&x[i]);
            if tree.predict(&x[i]) {
                if y[i] {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
    }
    let tree = DecisionTree::fit(&x, &y, opts)?;
    Ok(Evaluation {
        model: ClassifierModel { tree, unreachable_distance: unreachable, folds, seed },
        tpr: tp as f64 / spam as f64,
        fpr: fp as f64 / (y.len() - spam) as f64,
        roc: roc_curve(&scores, &y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    fn row(node: u32, distance: Option<u32>, max_flow: u32, spam: bool) -> FeatureVector {
        let label = Some(if spam { NodeClass::Spam } else { NodeClass::Benign });
        FeatureVector { node, distance, max_flow, label }
    }

    #[test]
    fn separated_classes() {
        let f: Vec<_> = (0..300)
            .map(|i| if i % 5 == 0 { row(i, None, 0, true) } else { row(i, Some(1 + i % 4), 2 + i % 3, false) })
            .collect();
        let e = train_evaluate(&f, 10, 1).unwrap();
        assert_eq!((e.tpr, e.fpr), (1.0, 0.0));
        let k = e.knee();
        assert_eq!((k.tpr, k.fpr), (1.0, 0.0));
        assert_eq!(e.model.unreachable_distance, 5.0);
        assert_eq!(e.model.classify(None, 0), NodeClass::Spam);
        assert_eq!(e.model.classify(Some(2), 3), NodeClass::Benign);
    }

    #[test]
    fn shuffled_labels_carry_no_signal() {
        let mut r = rng::from_seed(5);
        let f: Vec<_> = (0..10_000)
            .map(|i| {
                let d = (r.random::<f64>() < 0.9).then(|| r.random_range(1..8));
                row(i, d, d.map_or(0, |_| r.random_range(1..6)), r.random::<f64>() < 0.3)
            })
            .collect();
        let e = train_evaluate(&f, 10, 2).unwrap();
        assert!((e.tpr - e.fpr).abs() <= 0.05, "{} {}", e.tpr, e.fpr);
        let k = e.knee();
        assert!(k.tpr - k.fpr <= 0.05, "{k:?}");
    }

    #[test]
    fn distance_only_operating_point() {
        // spam becomes more likely with distance; the best cut "spam iff
        // d ≥ 4" has tpr 0.75, fpr 0.25
        let benign = [0.25, 0.25, 0.25, 0.10, 0.08, 0.07];
        let spam = [0.05, 0.08, 0.12, 0.25, 0.25, 0.25];
        let (mut best, mut oracle) = (f64::NEG_INFINITY, (0.0, 0.0));
        for t in 0..=benign.len() {
            let tpr: f64 = spam[t..].iter().sum();
            let fpr: f64 = benign[t..].iter().sum();
            if tpr - fpr > best {
                (best, oracle) = (tpr - fpr, (tpr, fpr));
            }
        }
        assert!((oracle.0 - 0.75).abs() < 1e-12 && (oracle.1 - 0.25).abs() < 1e-12);

        let mut r = rng::from_seed(8);
        let mut draw = |p: &[f64]| {
            let u = r.random::<f64>();
            let mut acc = 0.0;
            p.iter().position(|&x| {
                acc += x;
                u < acc
            })
            .unwrap_or(p.len() - 1) as u32
                + 1
        };
        let f: Vec<_> = (0..20_000)
            .map(|i| {
                let s = i % 2 == 0;
                row(i, Some(draw(if s { &spam } else { &benign })), 1, s)
            })
            .collect();
        let k = train_evaluate(&f, 10, 3).unwrap().knee();
        assert!((k.tpr - oracle.0).abs() < 0.02 && (k.fpr - oracle.1).abs() < 0.02, "{k:?}");
    }

    #[test]
    fn folds_partition_and_stratify() {
        let y: Vec<bool> = (0..257).map(|i| i % 7 == 0).collect();
        let f = stratified_folds(&y, 10, 4);
        for k in 0..10 {
            let pos = (0..y.len()).filter(|&i| f[i] == k && y[i]).count();
            let all = f.iter().filter(|&&x| x == k).count();
            assert!((3..=4).contains(&pos), "{pos}");
            assert!((25..=26).contains(&all), "{all}");
        }
        assert_eq!(f, stratified_folds(&y, 10, 4));
    }

    #[test]
    fn roc_is_monotone() {
        let mut r = rng::from_seed(6);
        let scores: Vec<f64> = (0..500).map(|_| (r.random::<f64>() * 10.0).floor() / 10.0).collect();
        let y: Vec<bool> = scores.iter().map(|&s| r.random::<f64>() < s).collect();
        let roc = roc_curve(&scores, &y);
        assert_eq!((roc[0].tpr, roc[0].fpr), (0.0, 0.0));
        let last = roc.last().unwrap();
        assert_eq!((last.tpr, last.fpr), (1.0, 1.0));
        assert!(roc.windows(2).all(|w| w[1].tpr >= w[0].tpr && w[1].fpr >= w[0].fpr && w[1].threshold < w[0].threshold));
    }

    #[test]
    fn rejects_bad_inputs() {
        let one: Vec<_> = (0..200).map(|i| row(i, Some(1), 1, false)).collect();
        assert!(matches!(train_evaluate(&one, 10, 0), Err(crate::Error::Degenerate(_))));
        let few: Vec<_> = (0..50).map(|i| row(i, Some(1), 1, i % 2 == 0)).collect();
        assert!(matches!(train_evaluate(&few, 10, 0), Err(crate::Error::InsufficientData(_))));
        let mut unlabelled = few.clone();
        unlabelled[0].label = None;
        assert!(train_evaluate(&unlabelled, 2, 0).is_err());
    }
}
