use anyhow::Result;
use rayon::prelude::*;
use serde_json::{json, Value};
use tweetstat_core::graph::NodeId;
use tweetstat_core::rng::derive_seed;
use tweetstat_core::spamlab::{connectivity_fraction, features_from_root, pick_root, sweep_cell, SkippedCell, SweepResult};
use tweetstat_core::synthgen::{SpamGraph, SpamGraphSpec};
use tweetstat_core::Error;

use super::{flags, on};
use crate::args::Spam;
use crate::io::{class_name, num, opt_num, parse_graph, parse_labels, read_input};
use crate::{RunContext, Usage};

/// Targets per max-flow work unit.
const CHUNK: usize = 256;

pub fn run(cmd: &Spam, ctx: &RunContext) -> Result<()> {
    match cmd {
        Spam::Features { graph, labels, root } => {
            let g = parse_graph(&read_input(graph)?, graph, 0)?;
            let classes = parse_labels(&read_input(labels)?, labels, &g)?;
            let sg = SpamGraph { graph: g.graph.clone(), labels: classes };
            let root = if root == "auto" {
                on(pick_root(&sg, ctx.seed), graph)?
            } else {
                g.node(root).ok_or_else(|| Usage(format!("--root {root:?} is not a node of {}", graph.display())))?
            };
            log::info!("root {}", g.name(root));
            let targets: Vec<NodeId> = (0..sg.graph.node_count() as NodeId).filter(|&v| v != root).collect();
            let parts: Vec<_> = targets.par_chunks(CHUNK).map(|c| features_from_root(&sg.graph, root, c)).collect();
            let mut rows = Vec::with_capacity(targets.len());
            for part in parts {
                for f in on(part, graph)? {
                    let label = class_name(sg.labels[f.node as usize]);
                    let distance = f.distance.map_or_else(|| "unreachable".to_string(), |d| d.to_string());
                    rows.push(vec![g.name(f.node), distance, f.max_flow.to_string(), label.to_string()]);
                }
            }
            ctx.sink.table(
                "features.csv",
                &format!("connectivity features from root {}", g.name(root)),
                &[
                    ("node", "target node"),
                    ("distance", "hops from the root, or unreachable"),
                    ("maxflow", "edge-disjoint paths from the root"),
                    ("label", "benign or spam"),
                ],
                &rows,
            )?;
        }
        Spam::Sweep { densities, bs_rates, n, replicates } => {
            if *replicates == 0 {
                return Err(Usage("--replicates must be at least 1".into()).into());
            }
            for &d in densities {
                for &b in bs_rates {
                    flags(SpamGraphSpec::new(*n, d, b, 0).validate())?;
                }
            }
            let seeds: Vec<u64> = (0..*replicates).map(|i| derive_seed(ctx.seed, "replicate", i)).collect();
            let mut cells = Vec::new();
            for &d in densities {
                for &b in bs_rates {
                    cells.extend(seeds.iter().map(|&s| (d, b, s)));
                }
            }
            let outcomes: Vec<_> = cells.par_iter().map(|&(d, b, s)| sweep_cell(d, b, *n, s)).collect();
            let (mut results, mut skipped) = (Vec::new(), Vec::new());
            for (&(d, b, s), r) in cells.iter().zip(outcomes) {
                match r {
                    Ok(r) => results.push(r),
                    Err(e @ (Error::Degenerate(_) | Error::InsufficientData(_) | Error::Capacity(_))) => {
                        log::warn!("skipping density {d}, bs-rate {b}, seed {s}: {e}");
                        skipped.push(SkippedCell { benign_density: d, bs_rate: b, seed: s, reason: e.to_string() });
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            write_sweep(ctx, &results, &skipped)?;
        }
        Spam::Connectivity { densities, bs_rate, n, pairs } => {
            let specs: Vec<SpamGraphSpec> = densities.iter().map(|&d| SpamGraphSpec::new(*n, d, *bs_rate, ctx.seed)).collect();
            for s in &specs {
                flags(s.validate())?;
            }
            let fractions: Vec<_> = specs.par_iter().map(|s| connectivity_fraction(s, *pairs, ctx.seed)).collect();
            let mut rows = Vec::new();
            for (d, f) in densities.iter().zip(fractions) {
                rows.push(vec![num(*d), num(flags(f)?)]);
            }
            ctx.sink.table(
                "connectivity.csv",
                &format!("connected benign pairs on 2^{n} nodes, bs-rate {bs_rate}"),
                &[("benign_density", "benign block density"), ("fraction", "benign pairs joined by a directed path")],
                &rows,
            )?;
        }
    }
    Ok(())
}

fn write_sweep(ctx: &RunContext, results: &[SweepResult], skipped: &[SkippedCell]) -> Result<()> {
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                num(r.benign_density),
                num(r.bs_rate),
                r.seed.to_string(),
                r.n_nodes.to_string(),
                r.root.to_string(),
                num(r.tpr),
                num(r.fpr),
                num(r.threshold),
                num(r.cv_tpr),
                num(r.cv_fpr),
            ]
        })
        .collect();
    ctx.sink.table(
        "sweep.csv",
        "spam classification over the density and bs-rate grid",
        &[
            ("benign_density", "benign block density"),
            ("bs_rate", "benign-to-spam edges per spam node"),
            ("seed", "graph and cross-validation seed"),
            ("n_nodes", "nodes in the graph"),
            ("root", "benign root node"),
            ("tpr", "true-positive rate at the ROC knee"),
            ("fpr", "false-positive rate at the ROC knee"),
            ("threshold", "spam probability cut at the knee"),
            ("cv_tpr", "true-positive rate of the majority-class prediction"),
            ("cv_fpr", "false-positive rate of the majority-class prediction"),
        ],
        &rows,
    )?;
    let roc: Vec<Value> = results
        .iter()
        .map(|r| {
            let points: Vec<Value> = r
                .roc
                .iter()
                .map(|p| json!({"threshold": opt_num(Some(p.threshold)), "tpr": p.tpr, "fpr": p.fpr}))
                .collect();
            json!({"benign_density": r.benign_density, "bs_rate": r.bs_rate, "seed": r.seed, "points": points})
        })
        .collect();
    ctx.sink.json("roc.json", &Value::Array(roc))?;
    let rows: Vec<Vec<String>> = skipped
        .iter()
        .map(|s| vec![num(s.benign_density), num(s.bs_rate), s.seed.to_string(), s.reason.clone()])
        .collect();
    ctx.sink.table(
        "skipped.csv",
        "grid cells that produced no classifier",
        &[
            ("benign_density", "benign block density"),
            ("bs_rate", "benign-to-spam edges per spam node"),
            ("seed", "graph seed"),
            ("reason", "why the cell was skipped"),
        ],
        &rows,
    )?;
    Ok(())
}

