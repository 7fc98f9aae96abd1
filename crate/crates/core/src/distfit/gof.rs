use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::binning::BinnedDensity;
use super::fit::{fit_mle, FitOptions};
use super::models::{continuized_cdf, Model};
use super::Sample;
use crate::error::{bail, Result};
use crate::numeric::CompensatedSum;
use crate::rng;
use crate::special::{chi2_sf, norm_sf};

/// Result of a G-test after merging sparse bins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GTest {
    pub statistic: f64,
    pub p_value: f64,
    /// Bins left after merging.
    pub bins: usize,
    pub dof: usize,
}

/// G-test of a binned sample against a fitted model, with the model's
/// integer atoms spread over `[x, x + 1)` to match the bin edges.
pub fn g_test<M: Model + ?Sized>(binned: &BinnedDensity, model: &M) -> Result<GTest> {
    g_test_with_cdf(binned, |t| continuized_cdf(model, t), model.n_params())
}

/// G-test against an arbitrary CDF. The expected counts use the model mass
/// inside the binned range; adjacent bins are merged until each expects at
/// least 5 observations.
pub fn g_test_with_cdf(binned: &BinnedDensity, cdf: impl Fn(f64) -> f64, n_params: usize) -> Result<GTest> {
    let n = binned.total() as f64;
    let f: Vec<f64> = binned.edges.iter().map(|&e| cdf(e)).collect();
    let range = f[f.len() - 1] - f[0];
    if !(range > 0.0) {
        bail!(Degenerate, "model puts no mass on the binned range");
    }
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for b in 0..binned.len() {
        o += binned.counts[b] as f64;
        e += n * (f[b + 1] - f[b]).max(0.0) / range;
        if e >= 5.0 {
            groups.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if o > 0.0 || e > 0.0 {
        match groups.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => groups.push((o, e)),
        }
    }
    if groups.len() < n_params + 2 {
        bail!(InsufficientData, "{} bins after merging leave no degrees of freedom", groups.len());
    }
    let statistic = 2.0
        * groups
            .iter()
            .filter(|g| g.0 > 0.0)
            .map(|&(o, e)| o * (o / e).ln())
            .collect::<CompensatedSum>()
            .value();
    let statistic = statistic.max(0.0);
    let dof = groups.len() - n_params - 1;
    Ok(GTest { statistic, p_value: chi2_sf(statistic, dof as f64), bins: groups.len(), dof })
}

/// `sup |EDF − CDF|` over the observations inside the model's support.
pub fn ks_distance<M: Model + ?Sized>(sample: &Sample, model: &M) -> f64 {
    let tail = sample.at_least(model.lower_bound());
    let n = tail.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let mut d: f64 = 0.0;
    let mut below = 0u64;
    // (x, F(x)) at the previous observed point
    let mut prev: Option<(f64, f64)> = None;
    for &(x, w) in tail.points() {
        let (f_left, f_here) = if model.is_discrete() {
            let left = match prev {
                Some((px, pf)) if x - px <= 32.0 => {
                    let mut acc = pf;
                    let mut y = px + 1.0;
                    while y < x {
                        acc += model.ln_density_unchecked(y).exp();
                        y += 1.0;
                    }
                    acc
                }
                _ => model.cdf(x - 1.0),
            };
            (left, left + model.ln_density_unchecked(x).exp())
        } else {
            let f = model.cdf(x);
            (f, f)
        };
        d = d.max((f_left - below as f64 / n).abs());
        below += w;
        d = d.max((f_here - below as f64 / n).abs());
        prev = Some((x, f_here));
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOptions {
    pub resamples: usize,
    /// Refit each synthetic sample before measuring its distance.
    pub refit: bool,
    pub seed: u64,
    pub fit: FitOptions,
}

impl Default for KsOptions {
    fn default() -> Self {
        Self { resamples: 1000, refit: true, seed: 0, fit: FitOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub d: f64,
    pub p_value: f64,
    pub resamples: usize,
}

/// KS distance with a parametric-bootstrap p-value: the fraction of
/// synthetic samples, drawn from `model` and refitted with the same lower
/// cut-off, whose distance is at least the observed one. A synthetic sample
/// that cannot be refitted counts as exceeding.
pub fn ks_test<M: Model + ?Sized>(sample: &Sample, model: &M, opts: &KsOptions) -> Result<KsTest> {
    let tail = sample.at_least(model.lower_bound());
    if tail.len() < 50 {
        bail!(InsufficientData, "{} observations inside the support, need 50", tail.len());
    }
    let d = ks_distance(&tail, model);
    let n = tail.len() as usize;
    let fit_opts = FitOptions { x_min: Some(model.lower_bound()), min_samples: 1, ..opts.fit };
    let mut exceed = 0usize;
    for b in 0..opts.resamples {
        let mut r = rng::stream(opts.seed, "ks-bootstrap", b as u64);
        let draws = model.sample_n(&mut r, n);
        let synthetic = if model.is_discrete() { Sample::from_integer_values(&draws) } else { Sample::from_values(&draws) };
        let db = match synthetic {
            Ok(s) if opts.refit => fit_mle(model.family(), &s, &fit_opts).map(|f| ks_distance(&s, &f.model)),
            Ok(s) => Ok(ks_distance(&s, model)),
            Err(e) => Err(e),
        };
        if db.map_or(true, |db| db >= d) {
            exceed += 1;
        }
    }
    let p_value = if opts.resamples == 0 { f64::NAN } else { exceed as f64 / opts.resamples as f64 };
    Ok(KsTest { d, p_value, resamples: opts.resamples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    A,
    B,
    Inconclusive,
}

/// Vuong's normalised likelihood-ratio test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vuong {
    /// `Σ ln f_A(x) − ln f_B(x)`.
    pub log_ratio: f64,
    /// `log_ratio / (σ̂ √n)`.
    pub z: f64,
    /// Two-sided normal p-value of `z`.
    pub p_value: f64,
    pub preferred: Preference,
}

/// Compare two models fitted to the same observations. Points outside the
/// support of exactly one model decide for the other outright.
pub fn likelihood_ratio<A: Model + ?Sized, B: Model + ?Sized>(
    a: &A,
    b: &B,
    sample: &Sample,
    significance: f64,
) -> Result<Vuong> {
    if sample.is_empty() {
        bail!(InsufficientData, "empty sample");
    }
    let n = sample.len() as f64;
    let mut lr = Vec::with_capacity(sample.distinct());
    let (mut a_out, mut b_out) = (false, false);
    for &(x, w) in sample.points() {
        let (la, lb) = (a.ln_density_unchecked(x), b.ln_density_unchecked(x));
        a_out |= la == f64::NEG_INFINITY;
        b_out |= lb == f64::NEG_INFINITY;
        lr.push((la - lb, w));
    }
    if a_out || b_out {
        let preferred = match (a_out, b_out) {
            (true, false) => Preference::B,
            (false, true) => Preference::A,
            _ => Preference::Inconclusive,
        };
        let sign = match preferred {
            Preference::A => 1.0,
            Preference::B => -1.0,
            Preference::Inconclusive => f64::NAN,
        };
        let p_value = if preferred == Preference::Inconclusive { 1.0 } else { 0.0 };
        return Ok(Vuong { log_ratio: sign * f64::INFINITY, z: sign * f64::INFINITY, p_value, preferred });
    }
    let total = lr.iter().map(|&(l, w)| w as f64 * l).collect::<CompensatedSum>().value();
    let mean = total / n;
    let var = lr.iter().map(|&(l, w)| w as f64 * (l - mean).powi(2)).collect::<CompensatedSum>().value() / n;
    let sd = var.sqrt();
    if !(sd > 1e-14 * (1.0 + mean.abs())) {
        return Ok(Vuong { log_ratio: total, z: 0.0, p_value: 1.0, preferred: Preference::Inconclusive });
    }
    let z = total / (sd * n.sqrt());
    let p_value = (2.0 * norm_sf(z.abs())).min(1.0);
    let preferred = if p_value >= significance {
        Preference::Inconclusive
    } else if z > 0.0 {
        Preference::A
    } else {
        Preference::B
    };
    Ok(Vuong { log_ratio: total, z, p_value, preferred })
}
