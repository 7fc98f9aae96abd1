pub mod debias;
pub mod distfit;
pub mod ingest;
pub mod net;
pub mod spam;
pub mod synth;
pub mod urnsim;

use std::path::Path;

use anyhow::{Context, Result};

use crate::Usage;

/// Core errors from checks that only see flag values are usage errors.
pub(crate) fn flags<T>(r: tweetstat_core::Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        tweetstat_core::Error::InvalidParameter(m) => Usage(format!("invalid parameter: {m}")).into(),
        e => anyhow::Error::new(e),
    })
}

/// Core errors raised while processing the named input.
pub(crate) fn on<T>(r: tweetstat_core::Result<T>, input: &Path) -> Result<T> {
    r.with_context(|| format!("processing {}", input.display()))
}
