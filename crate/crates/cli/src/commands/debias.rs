use anyhow::Result;
use serde_json::json;
use tweetstat_core::debias::{em_estimate, thin_histogram, EmOptions, ThinningModel};
use tweetstat_core::HistogramKind;

use super::{flags, on};
use crate::args::Debias;
use crate::io::{histogram_rows, num, parse_histogram, read_input, HISTOGRAM_COLUMNS};
use crate::{RunContext, Usage};

pub fn run(cmd: &Debias, ctx: &RunContext) -> Result<()> {
    match cmd {
        Debias::Em { p, tol, max_iter, max_count, histogram } => {
            let g = parse_histogram(&read_input(histogram)?, histogram, HistogramKind::Other)?;
            let observed_max = g.max_count().ok_or_else(|| anyhow::anyhow!("{}: empty histogram", histogram.display()))?;
            let model = match max_count {
                Some(max) if *max < observed_max => {
                    return Err(Usage(format!("--max-count {max} is below the largest observed count {observed_max}")).into())
                }
                Some(max) => flags(ThinningModel::new(*p, *max))?,
                None => flags(ThinningModel::for_histogram(*p, &g))?,
            };
            let opts = EmOptions { tol: *tol, max_iter: *max_iter, trace: false };
            let est = on(em_estimate(&g, model, opts), histogram)?;
            if !est.converged {
                log::warn!("EM stopped after {} iterations, last change {}", est.iterations, est.final_delta);
            }
            let rows: Vec<Vec<String>> = est.frequencies().map(|(i, f)| vec![i.to_string(), num(f)]).collect();
            ctx.sink.table(
                "em.csv",
                "recovered population histogram",
                &[("count", "items per user in the population"), ("f_hat", "estimated users with that count")],
                &rows,
            )?;
            ctx.sink.json(
                "em.json",
                &json!({
                    "gamma": est.gamma,
                    "iterations": est.iterations,
                    "final_delta": est.final_delta,
                    "converged": est.converged,
                    "population_total": est.population_total(),
                    "p": p,
                }),
            )?;
        }
        Debias::Thin { p, histogram } => {
            let f = parse_histogram(&read_input(histogram)?, histogram, HistogramKind::Other)?;
            let g = flags(thin_histogram(&f, *p, ctx.seed))?;
            ctx.sink.table("thinned.csv", &format!("histogram thinned at p={p}"), &HISTOGRAM_COLUMNS, &histogram_rows(&g))?;
        }
    }
    Ok(())
}
