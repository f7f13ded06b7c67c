//! Scenario runner behind the `sgspec` binary: load a generator, run the
//! requested checks, and serialize the verdicts.

pub mod checks;
pub mod output;
pub mod scenario;

use rayon::prelude::*;

pub use checks::{run_check, CheckOutput};
pub use output::{emit_report, write_atomic, REPORT_VERSION};
pub use scenario::{
    load_input, parse_times, CheckId, Format, InputSource, RunError, ScenarioConfig,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "SGSPEC_THREADS";

/// Runs every requested check, in request order. Checks run in parallel
/// when more than one thread is allowed; the result order is unaffected.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<CheckOutput>, RunError> {
    cfg.validate()?;
    let input = load_input(&cfg.input)?;
    let threads = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunError::Config(e.to_string()))?;
    let results: Vec<Result<CheckOutput, RunError>> = pool.install(|| {
        cfg.checks
            .par_iter()
            .map(|&id| run_check(id, &input, cfg))
            .collect()
    });
    results.into_iter().collect()
}

/// 0 when every check passes, 1 otherwise.
pub fn exit_code(results: &[CheckOutput]) -> u8 {
    if results.iter().all(|r| r.report.passed()) {
        0
    } else {
        1
    }
}
