//! Population count recovery from a binomially thinned sample.
//!
//! A user with `i` items in the population shows `j ~ Binomial(i, p)` items
//! in the sample and is seen at all only when `j ≥ 1`. The EM estimator
//! recovers the distribution `φ` of `i` among observed users, and from it the
//! population frequencies `f̂`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent float methods shadow it whenever std is linked
use num_traits::Float;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution};

use crate::error::{bail, Result};
use crate::hist::CountHistogram;
use crate::numeric::CompensatedSum;
use crate::rng;
use crate::special::ln_binom_pmf;

const KERNEL_FLOOR: f64 = 1e-15;
const PHI_FLOOR: f64 = 1e-12;

pub const DEFAULT_CAP_FACTOR: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinningModel {
    pub p: f64,
    /// Largest population count `I` in the support.
    pub max_count: u64,
}

impl ThinningModel {
    pub fn new(p: f64, max_count: u64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            bail!(InvalidParameter, "sampling probability {p} outside (0, 1]");
        }
        if max_count == 0 {
            bail!(InvalidParameter, "support cap must be positive");
        }
        Ok(Self { p, max_count })
    }

    /// Cap at [`DEFAULT_CAP_FACTOR`] times the largest observed count.
    pub fn for_histogram(p: f64, g: &CountHistogram) -> Result<Self> {
        let max = g.max_count().unwrap_or(1);
        Self::new(p, max.saturating_mul(DEFAULT_CAP_FACTOR))
    }

    /// `P(at least one of i items retained)`.
    pub fn detection(&self, i: u64) -> f64 {
        -(i as f64 * (-self.p).ln_1p()).exp_m1()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Keep the observed-data log-likelihood of every iterate.
    pub trace: bool,
}

impl Default for EmOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000, trace: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationEstimate {
    /// `phi[k]` is the probability that an observed user has `k + 1` items.
    pub phi: Vec<f64>,
    /// `f_hat[k]` is the recovered number of population users with `k + 1`
    /// items.
    pub f_hat: Vec<f64>,
    pub gamma: u64,
    pub iterations: usize,
    pub final_delta: f64,
    pub converged: bool,
    /// Observed-data log-likelihood before the first update and after each
    /// one; empty unless tracing was requested.
    pub log_likelihood: Vec<f64>,
}

impl PopulationEstimate {
    /// `(count, f̂)` for counts `1..=I`.
    pub fn frequencies(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.f_hat.iter().enumerate().map(|(k, &f)| (k as u64 + 1, f))
    }

    pub fn population_total(&self) -> f64 {
        self.f_hat.iter().copied().collect::<CompensatedSum>().value()
    }
}

/// `P(j observed | i present, at least one observed)`.
pub fn conditional_binomial(i: u64, j: u64, p: f64) -> Result<f64> {
    if j < 1 || j > i {
        bail!(Domain, "conditional binomial needs 1 <= j <= i, got i={i}, j={j}");
    }
    if !(p > 0.0 && p <= 1.0) {
        bail!(Domain, "sampling probability {p} outside (0, 1]");
    }
    let det = -(i as f64 * (-p).ln_1p()).exp_m1();
    Ok((ln_binom_pmf(j, i, p) - det.ln()).exp())
}

/// Sparse observation kernel: `columns[j]` lists `(support index, c_ij)`.
struct Kernel {
    columns: Vec<Vec<(u32, f64)>>,
    support: usize,
}

struct EmRun {
    phi: Vec<f64>,
    iterations: usize,
    final_delta: f64,
    converged: bool,
    trace: Vec<f64>,
}

fn log_likelihood(g: &[f64], pred: &[f64]) -> f64 {
    g.iter().zip(pred).filter(|(&gj, _)| gj > 0.0).map(|(&gj, &q)| gj * q.ln()).collect::<CompensatedSum>().value()
}

fn predict(kernel: &Kernel, phi: &[f64], pred: &mut [f64]) {
    for (q, col) in pred.iter_mut().zip(&kernel.columns) {
        *q = col.iter().map(|&(i, c)| c * phi[i as usize]).collect::<CompensatedSum>().value();
    }
}

fn run_em(kernel: &Kernel, g: &[f64], mut phi: Vec<f64>, opts: EmOptions) -> Result<EmRun> {
    if !(opts.tol > 0.0) {
        bail!(InvalidParameter, "tolerance must be positive");
    }
    let gamma: f64 = g.iter().sum();
    let mut pred = vec![0.0; g.len()];
    let mut next = vec![0.0; kernel.support];
    let mut trace = Vec::new();
    let mut delta = f64::INFINITY;
    let mut iterations = 0;
    predict(kernel, &phi, &mut pred);
    if g.iter().zip(&pred).any(|(&gj, &q)| gj > 0.0 && !(q > 0.0)) {
        bail!(Degenerate, "an observed count has zero probability under the support cap");
    }
    if opts.trace {
        trace.push(log_likelihood(g, &pred));
    }
    while iterations < opts.max_iter {
        next.iter_mut().for_each(|x| *x = 0.0);
        for ((col, &gj), &q) in kernel.columns.iter().zip(g).zip(&pred) {
            if gj == 0.0 {
                continue;
            }
            let ratio = gj / q;
            for &(i, c) in col {
                next[i as usize] += c * ratio;
            }
        }
        let mut total = CompensatedSum::new();
        for (n, &old) in next.iter_mut().zip(&phi) {
            *n *= old / gamma;
            total.add(*n);
        }
        let total = total.value();
        delta = 0.0;
        for (n, old) in next.iter_mut().zip(phi.iter_mut()) {
            *n /= total;
            delta = delta.max((*n - *old).abs());
            *old = *n;
        }
        iterations += 1;
        predict(kernel, &phi, &mut pred);
        if opts.trace {
            trace.push(log_likelihood(g, &pred));
        }
        if delta < opts.tol {
            break;
        }
    }
    Ok(EmRun { phi, iterations, final_delta: delta, converged: delta < opts.tol, trace })
}

fn floored_start(mut phi: Vec<f64>) -> Vec<f64> {
    let total: f64 = phi.iter().sum();
    phi.iter_mut().for_each(|x| *x = (*x / total).max(PHI_FLOOR));
    let total: f64 = phi.iter().sum();
    phi.iter_mut().for_each(|x| *x /= total);
    phi
}

/// Runs EM on the observed histogram `g`.
pub fn em_estimate(g: &CountHistogram, model: ThinningModel, opts: EmOptions) -> Result<PopulationEstimate> {
    let ThinningModel { p, max_count } = ThinningModel::new(model.p, model.max_count)?;
    let Some(max_obs) = g.max_count() else {
        bail!(InsufficientData, "empty observed histogram");
    };
    if max_obs > max_count {
        bail!(InvalidParameter, "observed count {max_obs} exceeds support cap {max_count}");
    }
    let cap = max_count as usize;
    let mut columns = Vec::with_capacity(g.len());
    let mut obs = Vec::with_capacity(g.len());
    for (j, gj) in g.iter() {
        let mut col = Vec::new();
        let mode = j as f64 / p;
        for i in j..=max_count {
            let c = conditional_binomial(i, j, p)?;
            if c >= KERNEL_FLOOR {
                col.push(((i - 1) as u32, c));
            } else if i as f64 > mode {
                break;
            }
        }
        columns.push(col);
        obs.push(gj as f64);
    }
    let kernel = Kernel { columns, support: cap };
    let mut start = vec![0.0; cap];
    for (j, gj) in g.iter() {
        start[j as usize - 1] = gj as f64;
    }
    let run = run_em(&kernel, &obs, floored_start(start), opts)?;
    let gamma = g.total_mass();
    let f_hat = run
        .phi
        .iter()
        .enumerate()
        .map(|(k, &ph)| gamma as f64 * ph / model.detection(k as u64 + 1))
        .collect();
    Ok(PopulationEstimate {
        phi: run.phi,
        f_hat,
        gamma,
        iterations: run.iterations,
        final_delta: run.final_delta,
        converged: run.converged,
        log_likelihood: run.trace,
    })
}

/// Each user keeps `Binomial(i, p)` of their `i` items; users left with none
/// disappear.
pub fn thin_histogram(f: &CountHistogram, p: f64, seed: u64) -> Result<CountHistogram> {
    ThinningModel::new(p, 1)?;
    let mut out = CountHistogram::new(f.kind());
    let mut rng = rng::stream(seed, "thin", 0);
    for (i, fi) in f.iter() {
        if p == 1.0 {
            out.add(i, fi)?;
            continue;
        }
        let binom = Binomial::new(i, p).map_err(|e| crate::Error::InvalidParameter(alloc::format!("{e}")))?;
        for _ in 0..fi {
            let j = binom.sample(&mut rng);
            if j > 0 {
                out.add(j, 1)?;
            }
        }
    }
    Ok(out)
}

/// Sparse joint histogram over count pairs, for example the weights of the
/// two directions of a user pair.
pub type PairHistogram = BTreeMap<(u64, u64), u64>;

#[derive(Debug, Clone, PartialEq)]
pub struct JointEstimate {
    /// `(i1, i2)` support points, `(0, 0)` excluded, in lexicographic order.
    pub support: Vec<(u64, u64)>,
    pub phi: Vec<f64>,
    pub f_hat: Vec<f64>,
    pub gamma: u64,
    pub iterations: usize,
    pub final_delta: f64,
    pub converged: bool,
    pub log_likelihood: Vec<f64>,
}

impl JointEstimate {
    /// Fraction of recovered pairs with both coordinates positive.
    pub fn reciprocated_fraction(&self) -> f64 {
        let (mut both, mut all) = (CompensatedSum::new(), CompensatedSum::new());
        for (&(a, b), &f) in self.support.iter().zip(&self.f_hat) {
            all.add(f);
            if a > 0 && b > 0 {
                both.add(f);
            }
        }
        both.value() / all.value()
    }

    /// Recovered mass at one support point.
    pub fn f_hat_at(&self, point: (u64, u64)) -> f64 {
        self.support.binary_search(&point).map(|k| self.f_hat[k]).unwrap_or(0.0)
    }
}

/// Joint EM over pairs thinned independently per coordinate. A pair is
/// observed when `j1 + j2 ≥ 1`. `model.max_count` caps each coordinate.
pub fn em_estimate_joint(g2: &PairHistogram, model: ThinningModel, opts: EmOptions) -> Result<JointEstimate> {
    let ThinningModel { p, max_count } = ThinningModel::new(model.p, model.max_count)?;
    let observed: Vec<((u64, u64), f64)> =
        g2.iter().filter(|&(&k, &f)| f > 0 && k != (0, 0)).map(|(&k, &f)| (k, f as f64)).collect();
    if observed.is_empty() {
        bail!(InsufficientData, "empty observed pair histogram");
    }
    if let Some(&((a, b), _)) = observed.iter().find(|&&((a, b), _)| a > max_count || b > max_count) {
        bail!(InvalidParameter, "observed pair ({a}, {b}) exceeds support cap {max_count}");
    }
    let side = max_count as usize + 1;
    let support: Vec<(u64, u64)> =
        (0..=max_count).flat_map(|a| (0..=max_count).map(move |b| (a, b))).skip(1).collect();
    let index = |a: u64, b: u64| (a as usize * side + b as usize - 1) as u32;
    // Per-coordinate unconditional binomial masses, `ln B(j; i, p)`.
    let ln_b = |j: u64, i: u64| ln_binom_pmf(j, i, p);
    let model = ThinningModel { p, max_count };
    let mut columns = Vec::with_capacity(observed.len());
    for &((j1, j2), _) in &observed {
        let mut col = Vec::new();
        for i1 in j1..=max_count {
            let l1 = ln_b(j1, i1);
            if l1.exp() < KERNEL_FLOOR && i1 as f64 > j1 as f64 / p {
                break;
            }
            for i2 in j2..=max_count {
                if i1 + i2 == 0 {
                    continue;
                }
                let ln = l1 + ln_b(j2, i2) - model.detection(i1 + i2).ln();
                let c = ln.exp();
                if c >= KERNEL_FLOOR {
                    col.push((index(i1, i2), c));
                } else if i2 as f64 > j2 as f64 / p {
                    break;
                }
            }
        }
        columns.push(col);
    }
    let kernel = Kernel { columns, support: support.len() };
    let obs: Vec<f64> = observed.iter().map(|o| o.1).collect();
    let mut start = vec![0.0; support.len()];
    for &((a, b), f) in &observed {
        start[index(a, b) as usize] = f;
    }
    let run = run_em(&kernel, &obs, floored_start(start), opts)?;
    let gamma = observed.iter().map(|o| o.1 as u64).sum();
    let f_hat = support
        .iter()
        .zip(&run.phi)
        .map(|(&(a, b), &ph)| gamma as f64 * ph / model.detection(a + b))
        .collect();
    Ok(JointEstimate {
        support,
        phi: run.phi,
        f_hat,
        gamma,
        iterations: run.iterations,
        final_delta: run.final_delta,
        converged: run.converged,
        log_likelihood: run.trace,
    })
}

/// Thins both coordinates of every pair independently; pairs reduced to
/// `(0, 0)` disappear.
pub fn thin_pairs(f2: &PairHistogram, p: f64, seed: u64) -> Result<PairHistogram> {
    ThinningModel::new(p, 1)?;
    let mut rng = rng::stream(seed, "thin-pairs", 0);
    let mut out = PairHistogram::new();
    let draw = |n: u64, rng: &mut rng::Rng| -> u64 {
        if n == 0 || p == 1.0 {
            return if p == 1.0 { n } else { 0 };
        }
        (0..n).filter(|_| rng.random::<f64>() < p).count() as u64
    };
    for (&(a, b), &f) in f2 {
        for _ in 0..f {
            let pair = (draw(a, &mut rng), draw(b, &mut rng));
            if pair != (0, 0) {
                *out.entry(pair).or_insert(0) += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hist::HistogramKind;

    #[test]
    fn conditional_binomial_values() {
        assert!((conditional_binomial(1, 1, 0.1).unwrap() - 1.0).abs() < 1e-12);
        assert!((conditional_binomial(2, 1, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((conditional_binomial(7, 7, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(conditional_binomial(2, 3, 0.5).is_err());
        assert!(conditional_binomial(2, 0, 0.5).is_err());
        let big = conditional_binomial(1_000_000, 100_000, 0.1).unwrap();
        assert!(big > 0.0 && big.is_finite());
    }

    #[test]
    fn conditional_column_sums_to_one() {
        for i in [1u64, 5, 40, 300] {
            let s: f64 = (1..=i).map(|j| conditional_binomial(i, j, 0.1).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-10, "{i}: {s}");
        }
    }

    #[test]
    fn identity_thinning() {
        let g = CountHistogram::from_pairs(HistogramKind::Tweets, [(1, 40), (3, 7), (9, 2)]).unwrap();
        let est = em_estimate(&g, ThinningModel::for_histogram(1.0, &g).unwrap(), EmOptions::default()).unwrap();
        for (c, f) in est.frequencies() {
            assert!((f - g.frequency(c) as f64).abs() < 1e-6, "{c}: {f}");
        }
    }

    #[test]
    fn single_support_point() {
        let g = CountHistogram::from_pairs(HistogramKind::Tweets, [(1, 100)]).unwrap();
        let est = em_estimate(&g, ThinningModel::new(0.5, 1).unwrap(), EmOptions::default()).unwrap();
        assert_eq!(est.phi, vec![1.0]);
        assert!((est.f_hat[0] - 200.0).abs() < 1e-9);
    }

    #[test]
    fn cap_below_observed_rejected() {
        let g = CountHistogram::from_pairs(HistogramKind::Tweets, [(5, 1)]).unwrap();
        assert!(em_estimate(&g, ThinningModel::new(0.5, 4).unwrap(), EmOptions::default()).is_err());
        assert!(em_estimate(&CountHistogram::default(), ThinningModel::new(0.5, 4).unwrap(), EmOptions::default()).is_err());
    }

    #[test]
    fn true_phi_is_fixed_point_of_expected_data() {
        let p = 0.3;
        let f = [(1u64, 500.0), (2, 300.0), (4, 120.0), (6, 40.0)];
        let cap = 8;
        let mut g = vec![0.0; cap];
        for &(i, fi) in &f {
            for j in 1..=i {
                g[j as usize - 1] += fi * model_det(p, i) * conditional_binomial(i, j, p).unwrap();
            }
        }
        // Build a kernel directly so the expected (fractional) data can be used.
        let columns = (1..=cap as u64)
            .map(|j| (j..=cap as u64).map(|i| ((i - 1) as u32, conditional_binomial(i, j, p).unwrap())).collect())
            .collect();
        let kernel = Kernel { columns, support: cap };
        let gamma: f64 = g.iter().sum();
        let mut phi = vec![0.0; cap];
        for &(i, fi) in &f {
            phi[i as usize - 1] = fi * model_det(p, i) / gamma;
        }
        let run = run_em(&kernel, &g, phi.clone(), EmOptions { max_iter: 1, ..Default::default() }).unwrap();
        for (a, b) in run.phi.iter().zip(&phi) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    fn model_det(p: f64, i: u64) -> f64 {
        ThinningModel { p, max_count: i }.detection(i)
    }

    #[test]
    fn likelihood_never_decreases() {
        let f = CountHistogram::from_values(HistogramKind::Tweets, (1..=3000u64).map(|k| 1 + k % 37 + (k % 5) * 9));
        let g = thin_histogram(&f, 0.2, 3).unwrap();
        let opts = EmOptions { tol: 1e-12, max_iter: 500, trace: true };
        let est = em_estimate(&g, ThinningModel::for_histogram(0.2, &g).unwrap(), opts).unwrap();
        assert_eq!(est.log_likelihood.len(), est.iterations + 1);
        for w in est.log_likelihood.windows(2) {
            assert!(w[1] >= w[0] - 1e-9 * w[0].abs(), "{} -> {}", w[0], w[1]);
        }
        assert!((est.phi.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(est.f_hat.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn thinning_identity_and_moments() {
        let f = CountHistogram::from_pairs(HistogramKind::Tweets, [(1, 100_000)]).unwrap();
        assert_eq!(thin_histogram(&f, 1.0, 1).unwrap(), f);
        let g = thin_histogram(&f, 0.1, 1).unwrap();
        let kept = g.total_mass() as f64;
        // sd = sqrt(1e5 * 0.09) ≈ 95; allow 5 sd
        assert!((kept - 10_000.0).abs() < 475.0, "{kept}");
        assert_eq!(g.max_count(), Some(1));
    }

    #[test]
    fn thinning_two_item_outcomes() {
        let f = CountHistogram::from_pairs(HistogramKind::Tweets, [(2, 1)]).unwrap();
        let mut tally = [0u32; 3];
        let n = 40_000;
        for seed in 0..n {
            let g = thin_histogram(&f, 0.5, seed).unwrap();
            tally[g.max_count().unwrap_or(0) as usize] += 1;
        }
        let expect = [0.25, 0.5, 0.25];
        for (t, e) in tally.iter().zip(expect) {
            let frac = *t as f64 / n as f64;
            // sd <= sqrt(0.25/4e4) = 0.0025
            assert!((frac - e).abs() < 0.0125, "{tally:?}");
        }
    }

    #[test]
    fn joint_identity() {
        let mut g2 = PairHistogram::new();
        g2.insert((1, 0), 30);
        g2.insert((2, 3), 5);
        g2.insert((0, 1), 12);
        let est = em_estimate_joint(&g2, ThinningModel::new(1.0, 4).unwrap(), EmOptions::default()).unwrap();
        for (&k, &f) in &g2 {
            assert!((est.f_hat_at(k) - f as f64).abs() < 1e-6);
        }
        assert!((est.reciprocated_fraction() - 5.0 / 47.0).abs() < 1e-9);
    }
}
