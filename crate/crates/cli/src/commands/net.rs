use anyhow::Result;
use serde_json::{json, Map, Value};
use tweetstat_core::netmetrics::{
    apl_correction, assortativity, clustering, clustering_estimator, degree_stats, path_length_distribution, reciprocity,
    ClusteringReport, TripletType,
};

use super::{flags, on};
use crate::args::{GraphInput, Net};
use crate::io::{opt_num, parse_graph, read_input, NamedGraph};
use crate::{RunContext, Usage};

fn load(input: &GraphInput) -> Result<NamedGraph> {
    if let Some(a) = input.sampled_alpha {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Usage(format!("--sampled-alpha must lie in (0, 1], got {a}")).into());
        }
    }
    parse_graph(&read_input(&input.graph)?, &input.graph, 0)
}

fn clustering_json(r: &ClusteringReport) -> Value {
    let m: Map<String, Value> = TripletType::ALL
        .iter()
        .map(|&t| {
            let s = r.get(t);
            let v = json!({
                "total": s.total,
                "closed": s.closed,
                "coefficient": opt_num(s.coefficient),
                "saturated": s.saturated,
            });
            (t.name().to_string(), v)
        })
        .collect();
    Value::Object(m)
}

pub fn run(cmd: &Net, ctx: &RunContext) -> Result<()> {
    match cmd {
        Net::Degrees { input } => {
            let g = load(input)?;
            let s = on(degree_stats(&g.graph), &input.graph)?;
            for (name, h) in [("in", &s.in_histogram), ("out", &s.out_histogram)] {
                let rows: Vec<Vec<String>> = h.iter().map(|(d, n)| vec![d.to_string(), n.to_string()]).collect();
                ctx.sink.table(
                    &format!("{name}_degree.csv"),
                    &format!("{name}-degree histogram"),
                    &[("degree", "distinct neighbours"), ("nodes", "nodes with that degree")],
                    &rows,
                )?;
            }
            ctx.sink.json(
                "degrees.json",
                &json!({
                    "nodes": g.graph.node_count(),
                    "edges": g.graph.edge_count(),
                    "mean_in": s.mean_in,
                    "mean_out": s.mean_out,
                    "sd_in": s.sd_in,
                    "sd_out": s.sd_out,
                }),
            )?;
        }
        Net::Reciprocity { input } => {
            let g = load(input)?;
            let r = on(reciprocity(&g.graph), &input.graph)?;
            ctx.sink.json(
                "reciprocity.json",
                &json!({"reciprocity": r, "nodes": g.graph.node_count(), "edges": g.graph.edge_count()}),
            )?;
        }
        Net::Paths { sources, apl_factor, input } => {
            let g = load(input)?;
            let n = g.graph.node_count();
            if *sources > n {
                log::info!("using all {n} nodes as sources");
            }
            let d = on(path_length_distribution(&g.graph, (*sources).min(n), ctx.seed), &input.graph)?;
            let rows: Vec<Vec<String>> =
                d.hops.iter().enumerate().skip(1).map(|(h, n)| vec![h.to_string(), n.to_string()]).collect();
            ctx.sink.table(
                "path_lengths.csv",
                "shortest-path lengths from sampled sources",
                &[("hops", "directed path length"), ("pairs", "source-target pairs at that length")],
                &rows,
            )?;
            let apl = d.average_path_length();
            let mut report = json!({
                "sources": d.sources,
                "reachable": d.reachable(),
                "unreachable": d.unreachable,
                "average_path_length": opt_num(apl),
                "median": opt_num(d.percentile(0.5)),
                "effective_diameter": opt_num(d.effective_diameter()),
            });
            if let (Some(alpha), Some(apl)) = (input.sampled_alpha, apl) {
                let c = flags(apl_correction(apl, *apl_factor))?;
                if !c.factor_in_range {
                    log::warn!("APL factor {apl_factor} is outside the usual range [1.5, 3]");
                }
                report["sampled_alpha"] = json!(alpha);
                report["corrected_average_path_length"] = json!(c.corrected);
                report["apl_factor"] = json!(apl_factor);
                report["factor_in_range"] = json!(c.factor_in_range);
            }
            ctx.sink.json("paths.json", &report)?;
        }
        Net::Assort { input } => {
            let g = load(input)?;
            let r = on(assortativity(&g.graph), &input.graph)?;
            let mut report = json!({
                "in_in": opt_num(r.r_in_in),
                "in_out": opt_num(r.r_in_out),
                "out_in": opt_num(r.r_out_in),
                "out_out": opt_num(r.r_out_out),
            });
            if let Some(alpha) = input.sampled_alpha {
                // edge sampling leaves the expected correlations unchanged
                report["sampled_alpha"] = json!(alpha);
            }
            ctx.sink.json("assortativity.json", &report)?;
        }
        Net::Cluster { input } => {
            let g = load(input)?;
            let r = on(clustering(&g.graph), &input.graph)?;
            let mut report = json!({"types": clustering_json(&r)});
            if let Some(alpha) = input.sampled_alpha {
                let est = flags(clustering_estimator(&r, alpha))?;
                report["sampled_alpha"] = json!(alpha);
                report["estimated"] = clustering_json(&est);
            }
            ctx.sink.json("clustering.json", &report)?;
        }
    }
    Ok(())
}
