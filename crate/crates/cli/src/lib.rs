//! Batch runner for the verification suites in `shintani-core`.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run, suite, Command};
pub use config::{Overrides, RunConfig};
pub use report::{strip_timing, Report, Table, SCHEMA_VERSION};

/// Run `f` on a pool capped at `threads` workers.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    Ok(b.build()?.install(f))
}
