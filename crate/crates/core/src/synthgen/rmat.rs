use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng as _;

use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::netmetrics::DegreeKind;
use crate::rng::{self, Rng};
use crate::special::{ln_binom_pmf, ln_choose};

/// Quadrant probabilities of the recursive cascade: `a` top-left, `b`
/// top-right, `c` bottom-left, `d` bottom-right. Rows are sources.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmatShape {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RmatShape {
    /// Shape fitted to a retweet graph.
    pub const RETWEET: RmatShape = RmatShape { a: 0.52, b: 0.18, c: 0.17, d: 0.13 };
    pub const UNIFORM: RmatShape = RmatShape { a: 0.25, b: 0.25, c: 0.25, d: 0.25 };

    pub fn validate(&self) -> Result<()> {
        let q = [self.a, self.b, self.c, self.d];
        if q.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
            bail!(InvalidParameter, "quadrant probabilities must lie in (0, 1), got {q:?}");
        }
        if (q.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            bail!(InvalidParameter, "quadrant probabilities must sum to 1, got {q:?}");
        }
        Ok(())
    }

    /// Probability that an edge lands in the top half: `a + b`.
    pub fn p(&self) -> f64 {
        self.a + self.b
    }

    /// Probability that an edge lands in the left half: `a + c`.
    pub fn q(&self) -> f64 {
        self.a + self.c
    }

    /// Joint shape from the two marginals. The marginals alone leave one
    /// degree of freedom; `a = p·q·(1 + skew)` fixes it, and every quadrant
    /// is kept at least `1e-6`.
    pub fn from_marginals(p: f64, q: f64, skew: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
            bail!(InvalidParameter, "marginals must lie in (0, 1), got p={p}, q={q}");
        }
        const FLOOR: f64 = 1e-6;
        let lo = (p + q - 1.0).max(0.0) + FLOOR;
        let hi = p.min(q) - FLOOR;
        if lo > hi {
            bail!(Degenerate, "marginals p={p}, q={q} leave no room for four positive quadrants");
        }
        let a = (p * q * (1.0 + skew)).clamp(lo, hi);
        let (b, c) = (p - a, q - a);
        Ok(RmatShape { a, b, c, d: 1.0 - a - b - c })
    }
}

pub const DEFAULT_SKEW: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmatParams {
    pub shape: RmatShape,
    /// log₂ of the node count.
    pub n: u32,
    pub edges: u64,
}

impl RmatParams {
    pub fn new(shape: RmatShape, n: u32, edges: u64) -> Result<Self> {
        let p = RmatParams { shape, n, edges };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if self.n > 31 {
            bail!(InvalidParameter, "at most 2^31 nodes, got 2^{}", self.n);
        }
        let nodes = 1u64 << self.n;
        if self.edges > nodes * (nodes - 1) {
            bail!(Capacity, "{} edges exceed the {} cells of a simple digraph on {nodes} nodes", self.edges, nodes * (nodes - 1));
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        1 << self.n
    }
}

fn ceil_log2(x: usize) -> u32 {
    x.next_power_of_two().trailing_zeros()
}

/// Draws cells of a `rows × cols` block by the cascade. Each dimension is
/// refined for `ceil(log₂)` levels; once one dimension runs out of levels
/// the other continues with its marginal.
///
/// Every edge first draws its row, then its column given the row. A cell
/// that falls outside the block, on a forbidden diagonal, or on a taken cell
/// has its column redrawn within the same row; a row that is already full
/// is redrawn. Row choices, and with them the out-degrees, therefore follow
/// the binomial cascade exactly.
pub(crate) struct Cascade {
    shape: RmatShape,
    rows: usize,
    cols: usize,
    row_levels: u32,
    col_levels: u32,
    no_diagonal: bool,
}

impl Cascade {
    pub(crate) fn new(shape: RmatShape, rows: usize, cols: usize, no_diagonal: bool) -> Self {
        Cascade { shape, rows, cols, row_levels: ceil_log2(rows), col_levels: ceil_log2(cols), no_diagonal }
    }

    pub(crate) fn capacity(&self) -> u64 {
        (0..self.rows).map(|i| self.row_capacity(i)).sum()
    }

    fn row_capacity(&self, row: usize) -> u64 {
        (self.cols - usize::from(self.no_diagonal && row < self.cols)) as u64
    }

    fn draw_row(&self, r: &mut Rng) -> usize {
        let p = self.shape.p();
        (0..self.row_levels).fold(0, |row, _| row << 1 | usize::from(r.random::<f64>() >= p))
    }

    fn draw_col(&self, row: usize, r: &mut Rng) -> usize {
        let RmatShape { a, b, c, d } = self.shape;
        let mut col = 0;
        for level in 0..self.col_levels {
            let p_right = if level < self.row_levels {
                match row >> (self.row_levels - 1 - level) & 1 {
                    0 => b / (a + b),
                    _ => d / (c + d),
                }
            } else {
                b + d
            };
            col = col << 1 | usize::from(r.random::<f64>() < p_right);
        }
        col
    }

    /// `count` distinct cells, row-major. Gives up after `100 · count` draws.
    pub(crate) fn fill(&self, count: u64, r: &mut Rng) -> Result<Vec<(usize, usize)>> {
        if count > self.capacity() {
            bail!(Capacity, "{count} cells requested from a block holding {}", self.capacity());
        }
        let budget = count.saturating_mul(100).max(100);
        let mut draws = 0u64;
        let spend = |draws: &mut u64| {
            *draws += 1;
            if *draws > budget {
                bail!(Capacity, "gave up after {budget} draws for {count} cells");
            }
            Ok(())
        };
        let mut per_row = alloc::vec![0u64; self.rows];
        for _ in 0..count {
            loop {
                spend(&mut draws)?;
                let row = self.draw_row(r);
                if row < self.rows && per_row[row] < self.row_capacity(row) {
                    per_row[row] += 1;
                    break;
                }
            }
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut taken: Vec<usize> = Vec::new();
        let mut seen = alloc::vec![false; self.cols];
        for (row, &m) in per_row.iter().enumerate() {
            taken.clear();
            // i.i.d. column draws in batches; keeping the distinct ones of
            // each batch is the same as redrawing every repeat at once
            while (taken.len() as u64) < m {
                for _ in taken.len() as u64..m {
                    let col = loop {
                        spend(&mut draws)?;
                        let col = self.draw_col(row, r);
                        if col < self.cols && !(self.no_diagonal && col == row) {
                            break col;
                        }
                    };
                    if !seen[col] {
                        seen[col] = true;
                        taken.push(col);
                    }
                }
            }
            taken.sort_unstable();
            for &col in &taken {
                seen[col] = false;
            }
            out.extend(taken.iter().map(|&col| (row, col)));
        }
        Ok(out)
    }
}

/// R-MAT graph with exactly `params.edges` distinct edges and no self-loops.
pub fn rmat_generate(params: &RmatParams, seed: u64) -> Result<WeightedDigraph> {
    params.validate()?;
    let n = params.nodes();
    let mut r = rng::stream(seed, "rmat", 0);
    let cells = Cascade::new(params.shape, n, n, true).fill(params.edges, &mut r)?;
    Ok(WeightedDigraph::from_edges(n, cells.into_iter().map(|(i, j)| (i as NodeId, j as NodeId, 1))))
}

/// Expected number of nodes with degree `k` under the independent binomial
/// cascade (duplicates and self-loops not removed):
/// `c_k = Σ_i C(n, i) · B(k; E, p^{n−i} (1−p)^i)`, with `p = a + b` for
/// out-degrees and `q = a + c` for in-degrees.
pub fn rmat_degree_expectation(k: u64, params: &RmatParams, kind: DegreeKind) -> f64 {
    let p = match kind {
        DegreeKind::Out => params.shape.p(),
        DegreeKind::In => params.shape.q(),
    };
    degree_expectation(k, params.n, params.edges, p)
}

pub(crate) fn degree_expectation(k: u64, n: u32, edges: u64, p: f64) -> f64 {
    if k > edges {
        return 0.0;
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    (0..=n)
        .map(|i| {
            let ln_pi = f64::from(n - i) * lp + f64::from(i) * lq;
            (ln_choose(f64::from(n), f64::from(i)) + ln_binom_pmf(k, edges, ln_pi.exp())).exp()
        })
        .sum()
}

/// `c_k` for `k = 0..=k_max`.
pub fn rmat_degree_expectations(k_max: u64, params: &RmatParams, kind: DegreeKind) -> Vec<f64> {
    (0..=k_max.min(params.edges)).map(|k| rmat_degree_expectation(k, params, kind)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::chi2_sf;
    use alloc::vec;

    #[test]
    fn shape_validation() {
        assert!(RmatShape::RETWEET.validate().is_ok());
        assert!((RmatShape::RETWEET.p() - 0.70).abs() < 1e-12 && (RmatShape::RETWEET.q() - 0.69).abs() < 1e-12);
        assert!(RmatShape { a: 0.5, b: 0.5, c: 0.0, d: 0.0 }.validate().is_err());
        assert!(RmatShape { a: 0.3, b: 0.3, c: 0.3, d: 0.3 }.validate().is_err());
        let s = RmatShape::from_marginals(0.7, 0.69, DEFAULT_SKEW).unwrap();
        assert!(s.validate().is_ok());
        assert!((s.p() - 0.7).abs() < 1e-12 && (s.q() - 0.69).abs() < 1e-12);
        assert!((s.a - 0.7 * 0.69 * 1.15).abs() < 1e-12);
        assert!(RmatParams::new(RmatShape::UNIFORM, 2, 13).is_err());
    }

    #[test]
    fn exact_edge_count_and_simple() {
        let p = RmatParams::new(RmatShape::RETWEET, 8, 3000).unwrap();
        let g = rmat_generate(&p, 5).unwrap();
        assert_eq!(g.edge_count(), 3000);
        assert!(g.edges().all(|(u, v, w)| u != v && w == 1));
        assert_eq!(g, rmat_generate(&p, 5).unwrap());
        assert_ne!(g, rmat_generate(&p, 6).unwrap());
        let one = rmat_generate(&RmatParams::new(RmatShape::RETWEET, 4, 1).unwrap(), 1).unwrap();
        assert_eq!(one.edge_count(), 1);
        // every cell of a 4-node digraph
        let full = rmat_generate(&RmatParams::new(RmatShape::RETWEET, 2, 12).unwrap(), 1).unwrap();
        assert_eq!(full.edge_count(), 12);
    }

    #[test]
    fn rectangular_cascade_stays_in_block() {
        let mut r = rng::from_seed(3);
        let cells = Cascade::new(RmatShape::RETWEET, 5, 300, false).fill(1000, &mut r).unwrap();
        assert_eq!(cells.len(), 1000);
        assert!(cells.iter().all(|&(i, j)| i < 5 && j < 300));
        let mut sorted = cells.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 1000);
        assert!(Cascade::new(RmatShape::RETWEET, 2, 2, false).fill(5, &mut r).is_err());
        assert_eq!(Cascade::new(RmatShape::RETWEET, 3, 2, true).capacity(), 4);
    }

    #[test]
    fn uniform_cascade_matches_uniform_placement() {
        // out-degrees of uniform placement without replacement are
        // hypergeometric; with E ≪ N² they are Binomial(N-1, E / (N(N-1)))
        let p = RmatParams::new(RmatShape::UNIFORM, 10, 8 * 1024).unwrap();
        let g = rmat_generate(&p, 9).unwrap();
        let n = 1024u64;
        let pi = 8.0 / 1023.0;
        for kind in [DegreeKind::Out, DegreeKind::In] {
            let mut obs = vec![0f64; 40];
            for v in 0..n as NodeId {
                let k = match kind {
                    DegreeKind::Out => g.out_degree(v),
                    DegreeKind::In => g.in_degree(v),
                };
                obs[k.min(39)] += 1.0;
            }
            let mut exp: Vec<f64> = (0..40).map(|k| n as f64 * ln_binom_pmf(k, n - 1, pi).exp()).collect();
            exp[39] += n as f64 - exp.iter().sum::<f64>();
            // merge into cells with expectation ≥ 5
            let (mut stat, mut cells, mut o, mut e) = (0.0, 0, 0.0, 0.0);
            for k in 0..40 {
                o += obs[k];
                e += exp[k];
                if e >= 5.0 && (n as f64 - exp[..=k].iter().sum::<f64>()) >= 5.0 {
                    stat += (o - e) * (o - e) / e;
                    cells += 1;
                    (o, e) = (0.0, 0.0);
                }
            }
            stat += (o - e) * (o - e) / e;
            cells += 1;
            let pv = chi2_sf(stat, (cells - 1) as f64);
            assert!(pv > 0.01, "{kind:?}: chi2 {stat} on {cells} cells, p {pv}");
        }
    }

    #[test]
    fn expectation_edge_cases() {
        let single = RmatParams { shape: RmatShape::RETWEET, n: 0, edges: 7 };
        assert!((rmat_degree_expectation(7, &single, DegreeKind::Out) - 1.0).abs() < 1e-12);
        assert_eq!(rmat_degree_expectation(6, &single, DegreeKind::Out), 0.0);
        let sym = RmatParams { shape: RmatShape::UNIFORM, n: 6, edges: 500 };
        for k in [0u64, 3, 7, 20] {
            let direct = 64.0 * ln_binom_pmf(k, 500, 0.5f64.powi(6)).exp();
            assert!((rmat_degree_expectation(k, &sym, DegreeKind::In) - direct).abs() < 1e-9 * direct.max(1e-300));
        }
    }

    #[test]
    fn expectation_mass_and_mean() {
        let s = RmatShape::from_marginals(0.7, 0.6, 0.0).unwrap();
        let p = RmatParams { shape: s, n: 10, edges: 10_000 };
        let c = rmat_degree_expectations(10_000, &p, DegreeKind::Out);
        let mass: f64 = c.iter().sum();
        let mean: f64 = c.iter().enumerate().map(|(k, &v)| k as f64 * v).sum();
        assert!((mass / 1024.0 - 1.0).abs() < 1e-6, "{mass}");
        assert!((mean / 1e4 - 1.0).abs() < 1e-6, "{mean}");
    }
}
