//! Command-line front end: construction, evaluation, convergence and timing
//! runs over the `latticeforge-core` library, with stable file formats.

pub mod artifact;
pub mod commands;
pub mod descriptor;
pub mod error;

pub use commands::{run, Cli};
pub use error::{CliError, Result};

/// Configures the global worker pool from `LATTICEFORGE_THREADS`
/// (unset or 0 means one thread per core).
pub fn init_threads() -> Result<()> {
    let n = match std::env::var("LATTICEFORGE_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("LATTICEFORGE_THREADS='{s}' is not a non-negative integer")))?,
        _ => 0,
    };
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    Ok(())
}
