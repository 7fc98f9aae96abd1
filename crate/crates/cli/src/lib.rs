//! Batch front end for `tweetstat-core`.
//!
//! Every subcommand reads plain-text inputs, writes CSV, TSV or JSON into
//! the output directory (atomically, through a temporary file), and prints
//! its effective seed on standard error. Exit codes: 0 success, 1 usage
//! error, 2 data or I/O error.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Parser;

pub mod args;
mod commands;
pub mod config;
pub mod io;

use args::{Cli, Command};
use config::ConfigFile;
use io::Sink;

pub const OUT_DIR_ENV: &str = "TWEETSTAT_OUT_DIR";

/// Marks an error caused by how the program was invoked rather than by its
/// inputs.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Shared state handed to every subcommand.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub seed: u64,
    pub sink: Sink,
}

/// Parse `args` (program name first), run the subcommand, map the outcome
/// to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut argv = Vec::new();
    for a in args {
        match a.into().into_string() {
            Ok(s) => argv.push(s),
            Err(bad) => {
                eprintln!("error: argument is not valid UTF-8: {bad:?}");
                return 1;
            }
        }
    }
    match try_run(&argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                1
            } else {
                2
            }
        }
    }
}

fn try_run(argv: &[String]) -> Result<i32> {
    let file = match config::config_path(argv) {
        Some(p) => ConfigFile::load(&p)?,
        None => ConfigFile::default(),
    };
    let cli = match Cli::try_parse_from(file.merge_into(argv)) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return Ok(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            });
        }
    };
    let g = &cli.global;
    let _ = env_logger::Builder::new().filter_level(g.log_level).format_timestamp(None).try_init();
    log::set_max_level(g.log_level);

    let seed = g.seed.unwrap_or_else(rand::random);
    eprintln!("seed: {seed}");

    let dir = g
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| file.out_dir())
        .unwrap_or_else(|| PathBuf::from("."));
    let dir = (dir.as_os_str() != "-").then_some(dir);
    let ctx = RunContext { seed, sink: Sink { dir, command: cli.command.name(), seed, timestamp: !g.no_timestamp } };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads.unwrap_or(0))
        .build()
        .context("cannot start worker threads")?;
    pool.install(|| dispatch(&cli.command, &ctx))?;
    Ok(0)
}

fn dispatch(cmd: &Command, ctx: &RunContext) -> Result<()> {
    match cmd {
        Command::Ingest(c) => commands::ingest::run(c, ctx),
        Command::Debias(c) => commands::debias::run(c, ctx),
        Command::Distfit(c) => commands::distfit::run(c, ctx),
        Command::Urnsim(c) => commands::urnsim::run(c, ctx),
        Command::Net(c) => commands::net::run(c, ctx),
        Command::Synth(c) => commands::synth::run(c, ctx),
        Command::Spam(c) => commands::spam::run(c, ctx),
    }
}
