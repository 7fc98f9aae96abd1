use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::binning::BinnedDensity;
use super::gof::ks_distance;
use super::models::*;
use super::Sample;
use crate::error::{bail, Result};
use crate::numeric::{golden_section, nelder_mead, Bounds, CompensatedSum, NelderMeadOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Smallest sample accepted.
    pub min_samples: u64,
    /// Fixed lower cut-off. For the power law `None` means scan; for the
    /// continuous families it means the sample minimum.
    pub x_min: Option<f64>,
    /// Power law: number of smallest distinct values tried as `x_min`.
    pub xmin_candidates: usize,
    /// Power law: smallest tail a candidate `x_min` may leave.
    pub min_tail: u64,
    pub nelder_mead: NelderMeadOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            min_samples: 100,
            x_min: None,
            xmin_candidates: 100,
            min_tail: 50,
            nelder_mead: NelderMeadOptions { f_tol: 1e-12, ..NelderMeadOptions::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub model: DistributionModel,
    pub log_likelihood: f64,
    /// Observations used (those at or above the fitted lower cut-off).
    pub n: u64,
    pub converged: bool,
    pub evaluations: usize,
    /// KS distance of the chosen power law on its tail.
    pub ks_distance: Option<f64>,
}

/// `Σ ln f(x)` over the sample; `-∞` if any point falls outside the support.
pub fn log_likelihood<M: Model + ?Sized>(model: &M, sample: &Sample) -> f64 {
    sample.points().iter().map(|&(x, w)| w as f64 * model.ln_density_unchecked(x)).collect::<CompensatedSum>().value()
}

/// Maximum-likelihood fit of `family` to `sample`.
pub fn fit_mle(family: Family, sample: &Sample, opts: &FitOptions) -> Result<Fit> {
    if sample.len() < opts.min_samples {
        bail!(InsufficientData, "{} observations, need at least {}", sample.len(), opts.min_samples);
    }
    if sample.distinct() < 2 {
        bail!(Degenerate, "all observations are equal");
    }
    if family.is_discrete() && !sample.is_integer() {
        bail!(Domain, "{} needs integer data", family.name());
    }
    match family {
        Family::PowerLaw => fit_power_law(sample, opts),
        Family::Weibull2 => fit_weibull2(sample, opts),
        Family::PowerLawLognormal | Family::Dpln | Family::PowerLawExp => fit_continuous(family, sample, opts),
    }
}

fn pl_alpha(n: f64, sum_ln: f64, x_min: u64) -> (f64, usize) {
    let m = golden_section(
        |a| a * sum_ln + n * crate::special::ln_hurwitz_zeta(a, x_min as f64),
        1.0 + 1e-9,
        12.0,
        1e-10,
        200,
    );
    (m.x[0], m.evaluations)
}

fn fit_power_law(sample: &Sample, opts: &FitOptions) -> Result<Fit> {
    let pts = sample.points();
    // suffix sums of multiplicity and Σ w ln x
    let mut suffix_n = vec![0u64; pts.len() + 1];
    let mut suffix_ln = vec![0.0; pts.len() + 1];
    for k in (0..pts.len()).rev() {
        suffix_n[k] = suffix_n[k + 1] + pts[k].1;
        suffix_ln[k] = suffix_ln[k + 1] + pts[k].1 as f64 * pts[k].0.ln();
    }
    let candidates: Vec<usize> = match opts.x_min {
        Some(x) => {
            if !(x >= 1.0 && x.fract() == 0.0) {
                bail!(InvalidParameter, "power-law x_min must be a positive integer, got {x}");
            }
            let k = pts.partition_point(|p| p.0 < x);
            if k == pts.len() {
                bail!(InsufficientData, "no observations at or above x_min={x}");
            }
            vec![k]
        }
        None => (0..pts.len()).filter(|&k| suffix_n[k] >= opts.min_tail).take(opts.xmin_candidates).collect(),
    };
    if candidates.is_empty() {
        bail!(InsufficientData, "no candidate x_min leaves {} observations", opts.min_tail);
    }
    let mut best: Option<(f64, DiscretePowerLaw, usize)> = None;
    let mut evaluations = 0;
    for &k in &candidates {
        let x_min = pts[k].0 as u64;
        let (alpha, evals) = pl_alpha(suffix_n[k] as f64, suffix_ln[k], x_min);
        evaluations += evals;
        let model = DiscretePowerLaw::new(alpha, x_min)?;
        let d = if candidates.len() == 1 { 0.0 } else { ks_distance(&sample.at_least(x_min as f64), &model) };
        if best.as_ref().map_or(true, |b| d < b.0) {
            best = Some((d, model, k));
        }
    }
    let (_, model, k) = best.expect("at least one candidate");
    let tail = sample.at_least(model.x_min as f64);
    let d = ks_distance(&tail, &model);
    Ok(Fit {
        log_likelihood: log_likelihood(&model, &tail),
        model: model.into(),
        n: suffix_n[k],
        converged: model.alpha < 12.0 - 1e-6,
        evaluations,
        ks_distance: Some(d),
    })
}

/// Power law fitted by least squares to a binned density in log-log space,
/// the traditional regression estimate. Bins below `x_min` are ignored.
pub fn fit_power_law_regression(binned: &BinnedDensity, x_min: u64) -> Result<DiscretePowerLaw> {
    let pts: Vec<(f64, f64)> = (0..binned.len())
        .filter(|&b| binned.heights[b] > 0.0 && binned.edges[b] >= x_min as f64)
        .map(|b| (binned.center(b).ln(), binned.heights[b].ln()))
        .collect();
    let Some(line) = crate::numeric::line(&pts) else {
        bail!(InsufficientData, "need two non-empty bins above x_min");
    };
    DiscretePowerLaw::new(-line.slope, x_min)
}

fn weibull_nll(sample: &Sample, beta: f64, c: f64) -> f64 {
    let Ok(m) = DiscreteWeibull2::new(beta, c) else {
        return f64::INFINITY;
    };
    let mut total = CompensatedSum::new();
    let mut ln_q = 0.0; // ln P(X > prev)
    let mut prev = 0u64;
    for &(x, w) in sample.points() {
        let x = x as u64;
        ln_q += m.ln_survival_between(prev + 1, x);
        let h = m.hazard(x);
        total.add(w as f64 * (h.ln() + ln_q));
        ln_q += (-h).ln_1p();
        prev = x;
    }
    -total.value()
}

fn fit_weibull2(sample: &Sample, opts: &FitOptions) -> Result<Fit> {
    if sample.min().unwrap_or(0.0) < 1.0 {
        bail!(Domain, "the discrete Weibull lives on x >= 1");
    }
    let n = sample.len() as f64;
    let h1 = sample.count_at_most(1.0) as f64 / n;
    let x0 = [0.3, h1.max(0.01).min(0.99)];
    let bounds = Bounds::new(vec![0.0, 1e-9], vec![0.999, 1.0]);
    let m = nelder_mead(|p| weibull_nll(sample, p[0], p[1]) / n, &x0, &bounds, opts.nelder_mead);
    let model = DiscreteWeibull2::new(m.x[0], m.x[1])?;
    Ok(Fit {
        log_likelihood: log_likelihood(&model, sample),
        model: model.into(),
        n: sample.len(),
        converged: m.converged,
        evaluations: m.evaluations,
        ks_distance: None,
    })
}

fn build_continuous(family: Family, p: &[f64], x_min: f64) -> Result<DistributionModel> {
    Ok(match family {
        Family::PowerLawLognormal => PowerLawLognormalCutoff::new(p[0], p[1], p[2], x_min)?.into(),
        Family::Dpln => Dpln::truncated(p[0], p[1], p[2], p[3], x_min)?.into(),
        Family::PowerLawExp => PowerLawExpCutoff::new(p[0], p[1].exp(), x_min)?.into(),
        _ => unreachable!("discrete family"),
    })
}

fn fit_continuous(family: Family, sample: &Sample, opts: &FitOptions) -> Result<Fit> {
    let x_min = opts.x_min.unwrap_or_else(|| sample.min().unwrap_or(0.0));
    let tail = sample.at_least(x_min);
    if tail.len() < opts.min_samples {
        bail!(InsufficientData, "{} observations above x_min={x_min}", tail.len());
    }
    if tail.distinct() < 2 {
        bail!(Degenerate, "all observations above x_min are equal");
    }
    let lower = if family == Family::Dpln { x_min.max(0.0) } else { x_min };
    if family != Family::Dpln && !(lower > 0.0) {
        bail!(Domain, "{} needs a positive x_min", family.name());
    }
    if tail.min().unwrap_or(0.0) <= 0.0 {
        bail!(Domain, "{} needs positive data", family.name());
    }
    let n = tail.len() as f64;
    let m_ln = tail.weighted_sum(|x| x.ln()) / n;
    let s_ln = (tail.weighted_sum(|x| (x.ln() - m_ln).powi(2)) / n).sqrt().max(1e-3);
    let ln_max = tail.max().unwrap_or(1.0).ln();
    let (x0, bounds) = match family {
        Family::PowerLawLognormal => (
            vec![1.0, m_ln + s_ln, s_ln],
            Bounds::new(vec![-3.0, x_min.ln() - 5.0 * s_ln, 1e-3], vec![5.0, ln_max + 10.0 * s_ln, 10.0 * s_ln + 1.0]),
        ),
        Family::Dpln => (
            vec![2.0, 1.0, m_ln, 0.5 * s_ln],
            Bounds::new(vec![0.01, 0.01, m_ln - 10.0 * s_ln, 1e-3], vec![50.0, 50.0, m_ln + 10.0 * s_ln, 10.0 * s_ln + 1.0]),
        ),
        Family::PowerLawExp => {
            let mean = tail.mean();
            (vec![1.0, mean.ln()], Bounds::new(vec![-2.0, (x_min * 1e-3).ln()], vec![6.0, (tail.max().unwrap_or(1.0) * 1e3).ln()]))
        }
        _ => unreachable!(),
    };
    let m = nelder_mead(
        |p| match build_continuous(family, p, lower) {
            Ok(model) => -log_likelihood(&model, &tail) / n,
            Err(_) => f64::INFINITY,
        },
        &x0,
        &bounds,
        opts.nelder_mead,
    );
    let model = build_continuous(family, &m.x, lower)?;
    Ok(Fit {
        log_likelihood: log_likelihood(&model, &tail),
        model,
        n: tail.len(),
        converged: m.converged,
        evaluations: m.evaluations,
        ks_distance: None,
    })
}
