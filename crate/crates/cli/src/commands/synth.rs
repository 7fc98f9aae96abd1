use anyhow::Result;
use serde_json::json;
use tweetstat_core::netmetrics::degree_stats;
use tweetstat_core::synthgen::{automat_fit, rmat_generate, spam_graph_generate, RmatParams, RmatShape, SpamGraphSpec};
use tweetstat_core::{CountHistogram, HistogramKind, WeightedDigraph};

use super::{flags, on};
use crate::args::Synth;
use crate::io::{class_name, parse_graph, read_input};
use crate::RunContext;

const EDGE_COLUMNS: [(&str, &str); 3] = [("src", "source node"), ("dst", "destination node"), ("weight", "edge weight")];

fn edge_rows(g: &WeightedDigraph) -> Vec<Vec<String>> {
    g.edges().map(|(u, v, w)| vec![u.to_string(), v.to_string(), w.to_string()]).collect()
}

fn positive(h: &[(u64, u64)]) -> CountHistogram {
    CountHistogram::from_pairs(HistogramKind::Other, h.iter().copied().filter(|&(d, _)| d > 0))
        .expect("degree histograms have distinct degrees")
}

pub fn run(cmd: &Synth, ctx: &RunContext) -> Result<()> {
    match cmd {
        Synth::Rmat { a, b, c, d, n, edges } => {
            let params = flags(RmatParams::new(RmatShape { a: *a, b: *b, c: *c, d: *d }, *n, *edges))?;
            let g = flags(rmat_generate(&params, ctx.seed))?;
            ctx.sink.table("rmat.tsv", &format!("R-MAT graph on 2^{n} nodes"), &EDGE_COLUMNS, &edge_rows(&g))?;
        }
        Synth::Spam { n, spam_frac, benign_density, bs_rate } => {
            let spec = SpamGraphSpec { spam_fraction: *spam_frac, ..SpamGraphSpec::new(*n, *benign_density, *bs_rate, ctx.seed) };
            flags(spec.validate())?;
            let sg = flags(spam_graph_generate(&spec))?;
            ctx.sink.table("spam_graph.tsv", &format!("spam-structured graph on 2^{n} nodes"), &EDGE_COLUMNS, &edge_rows(&sg.graph))?;
            let labels: Vec<Vec<String>> = sg
                .labels
                .iter()
                .enumerate()
                .map(|(v, &l)| vec![v.to_string(), class_name(l).to_string()])
                .collect();
            ctx.sink.table("spam_labels.tsv", "node classes", &[("node", "node id"), ("label", "benign or spam")], &labels)?;
        }
        Synth::Automat { graph } => {
            let g = parse_graph(&read_input(graph)?, graph, 0)?;
            let nodes = g.graph.node_count();
            let n = nodes.next_power_of_two().trailing_zeros();
            let s = on(degree_stats(&g.graph), graph)?;
            let edges = g.graph.edge_count() as u64;
            let fit = on(automat_fit(&positive(&s.out_histogram), &positive(&s.in_histogram), n, edges), graph)?;
            let sh = fit.params.shape;
            ctx.sink.json(
                "automat.json",
                &json!({
                    "p": fit.p,
                    "q": fit.q,
                    "p_at_boundary": fit.p_at_boundary,
                    "q_at_boundary": fit.q_at_boundary,
                    "converged": fit.converged,
                    "n": n,
                    "edges": edges,
                    "shape": {"a": sh.a, "b": sh.b, "c": sh.c, "d": sh.d},
                }),
            )?;
        }
    }
    Ok(())
}
