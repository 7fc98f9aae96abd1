use anyhow::Result;
use tweetstat_core::urnsim::{simulate, simulate_snapshots, JoinAccounting, UrnParams};

use super::flags;
use crate::args::{Join, UrnFlags, Urnsim};
use crate::io::{histogram_rows, HISTOGRAM_COLUMNS};
use crate::RunContext;

fn params(f: &UrnFlags, t: u64, seed: u64) -> UrnParams {
    let join = match f.join {
        Join::Budget => JoinAccounting::BudgetInclusive,
        Join::Extra => JoinAccounting::Extra,
    };
    UrnParams { a: f.a, alpha: f.alpha, c: f.c, t, seed, join }
}

pub fn run(cmd: &Urnsim, ctx: &RunContext) -> Result<()> {
    match cmd {
        Urnsim::Run { urn, t } => {
            let h = flags(simulate(&params(urn, *t, ctx.seed)))?;
            ctx.sink.table("urn.csv", &format!("tweets per user after {t} steps"), &HISTOGRAM_COLUMNS, &histogram_rows(&h))?;
        }
        Urnsim::Sweep { urn, t } => {
            let mut at = t.clone();
            at.sort_unstable();
            at.dedup();
            let last = *at.last().expect("clap requires one value");
            let snaps = flags(simulate_snapshots(&params(urn, last, ctx.seed), &at))?;
            for (t, h) in at.iter().zip(&snaps) {
                ctx.sink.table(
                    &format!("urn_T{t}.csv"),
                    &format!("tweets per user after {t} steps"),
                    &HISTOGRAM_COLUMNS,
                    &histogram_rows(h),
                )?;
            }
        }
    }
    Ok(())
}
