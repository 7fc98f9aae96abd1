use std::path::Path;

use anyhow::{anyhow, Result};
use serde_json::{json, Map, Value};
use tweetstat_core::distfit::{
    equal_count_bin, fit_mle, hazard_empirical, hazard_slope, ks_test, log_bin, scale_collapse, BinnedDensity, Family,
    FitOptions, KsOptions, Model, Sample,
};
use tweetstat_core::CountHistogram;

use super::{flags, on};
use crate::args::{BinMode, Distfit};
use crate::io::{num, opt_num, parse_intervals, parse_observations, read_input, Observations};
use crate::{RunContext, Usage};

fn load_sample(path: &Path, discrete: bool) -> Result<Sample> {
    match parse_observations(&read_input(path)?, path)? {
        Observations::Histogram(h) => Ok(Sample::from_histogram(&h)),
        Observations::Values(v) if discrete => on(Sample::from_integer_values(&v), path),
        Observations::Values(v) => on(Sample::from_values(&v), path),
    }
}

fn load_histogram(path: &Path) -> Result<CountHistogram> {
    match parse_observations(&read_input(path)?, path)? {
        Observations::Histogram(h) => Ok(h),
        Observations::Values(v) => on(Sample::from_integer_values(&v), path)?
            .to_histogram()
            .ok_or_else(|| anyhow!("{}: counts must be positive integers", path.display())),
    }
}

fn bin_rows(b: &BinnedDensity) -> Vec<Vec<String>> {
    (0..b.len())
        .map(|i| {
            vec![num(b.edges[i]), num(b.edges[i + 1]), num(b.center(i)), b.counts[i].to_string(), num(b.heights[i])]
        })
        .collect()
}

const BIN_COLUMNS: [(&str, &str); 5] = [
    ("lower", "bin lower edge"),
    ("upper", "bin upper edge"),
    ("center", "geometric bin centre"),
    ("count", "observations in the bin"),
    ("density", "count / (total * width)"),
];

pub fn run(cmd: &Distfit, ctx: &RunContext) -> Result<()> {
    match cmd {
        Distfit::Fit { family, x_min, resamples, data } => {
            let fam = Family::from_name(family)
                .ok_or_else(|| Usage(format!("unknown family {family:?}; expected pl, dw2, plln, dpln or plexp")))?;
            let sample = load_sample(data, fam.is_discrete())?;
            let opts = FitOptions { x_min: *x_min, ..FitOptions::default() };
            let fit = on(fit_mle(fam, &sample, &opts), data)?;
            if !fit.converged {
                log::warn!("{}: optimiser stopped before converging", fam.name());
            }
            let ks = on(ks_test(&sample, &fit.model, &KsOptions { resamples: *resamples, refit: true, seed: ctx.seed, fit: opts }), data)?;
            let params: Map<String, Value> = fit.model.params().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            ctx.sink.json(
                &format!("fit_{}.json", fam.name()),
                &json!({
                    "family": fam.name(),
                    "params": params,
                    "loglik": opt_num(Some(fit.log_likelihood)),
                    "n": fit.n,
                    "converged": fit.converged,
                    "ks_D": opt_num(Some(ks.d)),
                    "ks_p": opt_num(Some(ks.p_value)),
                    "ks_resamples": ks.resamples,
                }),
            )?;
        }
        Distfit::Bin { mode, bins_per_decade, bins, data } => {
            let sample = load_sample(data, false)?;
            let (b, name) = match mode {
                BinMode::Log => (flags(log_bin(&sample, *bins_per_decade))?, "log"),
                BinMode::Eqcount => {
                    let k = bins.unwrap_or((sample.len() / 10).max(1));
                    (on(equal_count_bin(&sample, k), data)?, "eqcount")
                }
            };
            ctx.sink.table(&format!("binned_{name}.csv"), &format!("{name}-binned density"), &BIN_COLUMNS, &bin_rows(&b))?;
        }
        Distfit::Hazard { floor, bins_per_decade, histogram } => {
            let h = load_histogram(histogram)?;
            let rows: Vec<Vec<String>> = hazard_empirical(&h, *floor)
                .iter()
                .map(|p| vec![p.x.to_string(), num(p.hazard), p.at_risk.to_string(), p.events.to_string()])
                .collect();
            ctx.sink.table(
                "hazard.csv",
                "empirical hazard",
                &[
                    ("x", "count"),
                    ("hazard", "events / at_risk"),
                    ("at_risk", "users with count >= x"),
                    ("events", "users with count == x"),
                ],
                &rows,
            )?;
            let line = hazard_slope(&h, *bins_per_decade, *floor);
            if let Err(e) = &line {
                log::warn!("{}: no hazard slope: {e}", histogram.display());
            }
            let line = line.ok();
            ctx.sink.json(
                "hazard.json",
                &json!({
                    "slope": opt_num(line.map(|l| l.slope)),
                    "intercept": opt_num(line.map(|l| l.intercept)),
                    "floor": floor,
                    "bins_per_decade": bins_per_decade,
                }),
            )?;
        }
        Distfit::Collapse { bins_per_decade, min_intervals, intervals } => {
            let series = parse_intervals(&read_input(intervals)?, intervals)?;
            let c = on(scale_collapse(&series, *bins_per_decade, *min_intervals), intervals)?;
            let mut rows = Vec::new();
            for g in &c.groups {
                let d = &g.density;
                for i in 0..d.len() {
                    rows.push(vec![
                        g.lower.to_string(),
                        g.upper.to_string(),
                        num(g.mean),
                        num(d.edges[i]),
                        num(d.edges[i + 1]),
                        num(d.heights[i]),
                    ]);
                }
            }
            ctx.sink.table(
                "collapse.csv",
                "interval densities rescaled by the group mean",
                &[
                    ("lower", "smallest record count of the group"),
                    ("upper", "largest record count of the group"),
                    ("mean", "group mean interval"),
                    ("bin_lower", "lower edge in units of the mean"),
                    ("bin_upper", "upper edge in units of the mean"),
                    ("density", "density of interval / mean"),
                ],
                &rows,
            )?;
            let groups: Vec<Value> =
                c.groups.iter().map(|g| json!({"lower": g.lower, "upper": g.upper, "mean": g.mean})).collect();
            ctx.sink.json("collapse.json", &json!({"metric": opt_num(Some(c.metric)), "groups": groups}))?;
        }
    }
    Ok(())
}
