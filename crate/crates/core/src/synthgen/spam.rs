use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::rmat::{Cascade, RmatShape};
use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeClass {
    Benign,
    Spam,
}

/// The four blocks of the adjacency matrix, rows being edge sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    BenignBenign,
    BenignSpam,
    SpamBenign,
    SpamSpam,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::BenignBenign, Quadrant::BenignSpam, Quadrant::SpamBenign, Quadrant::SpamSpam];

    pub fn of(src: NodeClass, dst: NodeClass) -> Quadrant {
        match (src, dst) {
            (NodeClass::Benign, NodeClass::Benign) => Quadrant::BenignBenign,
            (NodeClass::Benign, NodeClass::Spam) => Quadrant::BenignSpam,
            (NodeClass::Spam, NodeClass::Benign) => Quadrant::SpamBenign,
            (NodeClass::Spam, NodeClass::Spam) => Quadrant::SpamSpam,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpamGraphSpec {
    /// log₂ of the total node count.
    pub n: u32,
    pub spam_fraction: f64,
    /// Fraction of the possible benign→benign edges present; the S–B and S–S
    /// blocks get the same density.
    pub benign_density: f64,
    /// Benign→spam edges per spam node.
    pub bs_rate: f64,
    pub shape: RmatShape,
    pub seed: u64,
}

impl SpamGraphSpec {
    pub const DEFAULT_SPAM_FRACTION: f64 = 0.10;

    pub fn new(n: u32, benign_density: f64, bs_rate: f64, seed: u64) -> Self {
        SpamGraphSpec { n, spam_fraction: Self::DEFAULT_SPAM_FRACTION, benign_density, bs_rate, shape: RmatShape::RETWEET, seed }
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if self.n > 31 {
            bail!(InvalidParameter, "at most 2^31 nodes, got 2^{}", self.n);
        }
        if !(0.0..1.0).contains(&self.spam_fraction) {
            bail!(InvalidParameter, "spam fraction must lie in [0, 1), got {}", self.spam_fraction);
        }
        if !(0.0..=1.0).contains(&self.benign_density) {
            bail!(InvalidParameter, "benign density must lie in [0, 1], got {}", self.benign_density);
        }
        if !(self.bs_rate >= 0.0 && self.bs_rate.is_finite()) {
            bail!(InvalidParameter, "B-S rate must be non-negative, got {}", self.bs_rate);
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        1 << self.n
    }

    pub fn spam_nodes(&self) -> usize {
        (self.spam_fraction * self.nodes() as f64).round() as usize
    }

    pub fn benign_nodes(&self) -> usize {
        self.nodes() - self.spam_nodes()
    }

    /// Edge count requested for each block, in the order of [`Quadrant::ALL`].
    pub fn targets(&self) -> [u64; 4] {
        let (b, s) = (self.benign_nodes() as f64, self.spam_nodes() as f64);
        let dense = |cells: f64| (self.benign_density * cells).round() as u64;
        [dense(b * (b - 1.0)), (self.bs_rate * s).round() as u64, dense(s * b), dense(s * (s - 1.0).max(0.0))]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpamGraph {
    pub graph: WeightedDigraph,
    /// Benign nodes come first, then spam nodes.
    pub labels: Vec<NodeClass>,
}

impl SpamGraph {
    pub fn is_spam(&self, v: NodeId) -> bool {
        self.labels[v as usize] == NodeClass::Spam
    }

    pub fn quadrant_counts(&self) -> [u64; 4] {
        let mut c = [0u64; 4];
        for (u, v, _) in self.graph.edges() {
            c[Quadrant::of(self.labels[u as usize], self.labels[v as usize]) as usize] += 1;
        }
        c
    }
}

/// Graph whose adjacency matrix is split into benign and spam blocks, each
/// block filled by its own cascade. The benign block uses the same stream
/// as [`super::rmat_generate`], so without spam nodes the two agree.
pub fn spam_graph_generate(spec: &SpamGraphSpec) -> Result<SpamGraph> {
    spec.validate()?;
    let (nb, ns) = (spec.benign_nodes(), spec.spam_nodes());
    let targets = spec.targets();
    let blocks = [(nb, nb, 0, 0), (nb, ns, 0, nb), (ns, nb, nb, 0), (ns, ns, nb, nb)];
    let mut edges = Vec::with_capacity(targets.iter().sum::<u64>() as usize);
    for (k, &(rows, cols, r0, c0)) in blocks.iter().enumerate() {
        if targets[k] == 0 {
            continue;
        }
        let cascade = Cascade::new(spec.shape, rows, cols, r0 == c0);
        if targets[k] > cascade.capacity() {
            bail!(Capacity, "{:?} block asks for {} edges, holds {}", Quadrant::ALL[k], targets[k], cascade.capacity());
        }
        let mut r = rng::stream(spec.seed, "rmat", k as u64);
        let cells = cascade.fill(targets[k], &mut r)?;
        edges.extend(cells.into_iter().map(|(i, j)| ((r0 + i) as NodeId, (c0 + j) as NodeId, 1)));
    }
    let mut labels = alloc::vec![NodeClass::Benign; nb];
    labels.resize(nb + ns, NodeClass::Spam);
    Ok(SpamGraph { graph: WeightedDigraph::from_edges(nb + ns, edges), labels })
}
