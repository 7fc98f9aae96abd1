//! Urn process for per-user counts: one user joins per step and the step's
//! tweets go to existing users with probability proportional to `A + k^α`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent float methods shadow it whenever std is linked
use num_traits::Float;
use rand::Rng as _;

use crate::distfit::{log_bin, Sample};
use crate::error::{bail, Result};
use crate::hist::{CountHistogram, HistogramKind};
use crate::numeric::{weighted_line, Line};
use crate::rng;

/// Where the joining user's first tweet comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JoinAccounting {
    /// The first tweet is paid out of the step's `c·t` budget.
    #[default]
    BudgetInclusive,
    /// The first tweet is on top of the budget.
    Extra,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UrnParams {
    /// Initial attractiveness `A ≥ 0`.
    pub a: f64,
    /// Preference exponent in `(0, 1.5]`.
    pub alpha: f64,
    /// Tweets per step per existing user.
    pub c: f64,
    /// Number of steps, one joining user each.
    pub t: u64,
    pub seed: u64,
    pub join: JoinAccounting,
}

impl Default for UrnParams {
    fn default() -> Self {
        Self { a: 1.0, alpha: 0.88, c: 2.07e-4, t: 1_000_000, seed: 0, join: JoinAccounting::default() }
    }
}

impl UrnParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0 && self.a.is_finite()) {
            bail!(InvalidParameter, "initial attractiveness must be finite and >= 0, got {}", self.a);
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.5) {
            bail!(InvalidParameter, "preference exponent must lie in (0, 1.5], got {}", self.alpha);
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            bail!(InvalidParameter, "rate c must be positive, got {}", self.c);
        }
        if self.t < 1 {
            bail!(InvalidParameter, "need at least one step");
        }
        if self.t > u64::from(u32::MAX) {
            bail!(Capacity, "{} users exceed the 2^32 limit", self.t);
        }
        Ok(())
    }
}

/// Binary indexed tree over non-negative weights with descent sampling.
#[derive(Debug)]
struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self { tree: vec![0.0; n.next_power_of_two() + 1] }
    }

    fn add(&mut self, i: usize, delta: f64) {
        let mut j = i + 1;
        while j < self.tree.len() {
            self.tree[j] += delta;
            j += j & j.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        self.tree[self.tree.len() - 1]
    }

    /// Smallest index whose prefix sum exceeds `target`.
    fn find(&self, mut target: f64) -> usize {
        let mut pos = 0;
        let mut step = (self.tree.len() - 1) >> 1;
        // the root covers the whole range; descend from half of it
        if target >= self.tree[self.tree.len() - 1] {
            return self.tree.len() - 2;
        }
        while step > 0 {
            let next = pos + step;
            if self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// Run the urn and return snapshots of the count histogram after each step
/// listed in `at` (ascending, each `≤ params.t`). A snapshot at step `s`
/// equals the result of a run with `t = s` and the same seed.
pub fn simulate_snapshots(params: &UrnParams, at: &[u64]) -> Result<Vec<CountHistogram>> {
    params.validate()?;
    if at.windows(2).any(|w| w[0] >= w[1]) || at.iter().any(|&s| s < 1 || s > params.t) {
        bail!(InvalidParameter, "snapshot steps must be ascending within 1..={}", params.t);
    }
    let n = params.t as usize;
    let mut r = rng::stream(params.seed, "urn", 0);
    let mut counts: Vec<u64> = Vec::with_capacity(n);
    let mut tree = Fenwick::new(n);
    const TABLE: usize = 1 << 16;
    let table: Vec<f64> = (0..TABLE).map(|k| params.a + (k as f64).powf(params.alpha)).collect();
    let weight = |k: u64| if (k as usize) < TABLE { table[k as usize] } else { params.a + (k as f64).powf(params.alpha) };
    let mut budget = 0.0f64;
    let mut snapshots = Vec::with_capacity(at.len());
    let mut next_snapshot = at.iter().copied().peekable();
    for step in 1..=params.t {
        counts.push(1);
        tree.add(counts.len() - 1, weight(1));
        budget += params.c * step as f64;
        if params.join == JoinAccounting::BudgetInclusive {
            budget -= 1.0;
        }
        if budget >= 1.0 {
            let extra = budget.floor();
            budget -= extra;
            for _ in 0..extra as u64 {
                let total = tree.total();
                if !total.is_finite() {
                    bail!(Overflow, "urn weight total is no longer finite at step {step}");
                }
                let u: f64 = r.random::<f64>() * total;
                let i = tree.find(u).min(counts.len() - 1);
                let k = counts[i];
                let Some(k1) = k.checked_add(1) else {
                    bail!(Overflow, "count overflow at step {step}");
                };
                counts[i] = k1;
                tree.add(i, weight(k1) - weight(k));
            }
        }
        if next_snapshot.peek() == Some(&step) {
            next_snapshot.next();
            snapshots.push(CountHistogram::from_values(HistogramKind::Tweets, counts.iter().copied()));
        }
    }
    Ok(snapshots)
}

/// Final count histogram of the urn process.
pub fn simulate(params: &UrnParams) -> Result<CountHistogram> {
    Ok(simulate_snapshots(params, &[params.t])?.pop().expect("one snapshot"))
}

/// Location `μ ≈ 1.32 ln(ct) + 0.56` of the lognormal cutoff.
pub fn crossing_mu(c: f64, t: f64) -> Result<f64> {
    let ct = c * t;
    if !(ct > 0.0) {
        bail!(Domain, "c·t must be positive, got {ct}");
    }
    Ok(1.32 * ct.ln() + 0.56)
}

/// Exponent of the rate density `p(λ) ∝ λ^{-(α+β-1)/α}` implied by a count
/// density `p(k) ∝ k^{-β}` under `λ ∝ k^α`.
pub fn rate_exponent(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        bail!(Domain, "preference exponent must be positive, got {alpha}");
    }
    Ok((-1.0 + alpha + beta) / alpha)
}

/// Log-binned density of a count histogram as `(ln centre, ln height,
/// count)` per non-empty bin.
fn log_density(hist: &CountHistogram, bins_per_decade: u32) -> Result<Vec<(f64, f64, u64)>> {
    let b = log_bin(&Sample::from_histogram(hist), bins_per_decade)?;
    Ok((0..b.len())
        .filter(|&i| b.counts[i] > 0)
        .map(|i| {
            // centre of an integer bin [lo, hi) is the geometric mean of its end points lo and hi-1
            let centre = (b.edges[i] * (b.edges[i + 1] - 1.0)).sqrt();
            (centre.ln(), b.heights[i].ln(), b.counts[i])
        })
        .collect())
}

/// Weighted least-squares slope of the log-binned density over the bins
/// whose centre lies in `[lo, hi]`; weights are the bin counts.
pub fn log_slope(hist: &CountHistogram, bins_per_decade: u32, lo: f64, hi: f64) -> Result<Line> {
    let pts = log_density(hist, bins_per_decade)?;
    let inside: Vec<&(f64, f64, u64)> = pts.iter().filter(|p| p.0 >= lo.ln() && p.0 <= hi.ln()).collect();
    let xy: Vec<(f64, f64)> = inside.iter().map(|p| (p.0, p.1)).collect();
    let w: Vec<f64> = inside.iter().map(|p| p.2 as f64).collect();
    match weighted_line(&xy, &w) {
        Some(l) if xy.len() >= 2 => Ok(l),
        _ => bail!(InsufficientData, "fewer than two non-empty bins in [{lo}, {hi}]"),
    }
}

/// First count at which the local log-log slope of the density, fitted over
/// `window` consecutive non-empty log bins, falls below `threshold`. Bins
/// holding fewer than `min_count` users are ignored.
pub fn crossing_point(
    hist: &CountHistogram,
    bins_per_decade: u32,
    window: usize,
    threshold: f64,
    min_count: u64,
) -> Result<Option<f64>> {
    if window < 2 {
        bail!(InvalidParameter, "slope window needs at least two bins");
    }
    let pts: Vec<(f64, f64, u64)> =
        log_density(hist, bins_per_decade)?.into_iter().filter(|p| p.2 >= min_count).collect();
    for win in pts.windows(window) {
        let xy: Vec<(f64, f64)> = win.iter().map(|p| (p.0, p.1)).collect();
        let w: Vec<f64> = win.iter().map(|p| p.2 as f64).collect();
        if let Some(l) = weighted_line(&xy, &w) {
            if l.slope < threshold {
                let mid = win.iter().map(|p| p.0).sum::<f64>() / window as f64;
                return Ok(Some(mid.exp()));
            }
        }
    }
    Ok(None)
}
