//! Built-in verification suites: named pass/fail checks over the library's
//! closed-form oracles, printed one line per check. The sampling seed is
//! echoed with the summary so a report can be reproduced exactly.

use clap::Args;
use sigma_yamabe::verify::{run_suite, SUITE_SEED};

use crate::CliError;

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite selector: paper, cones, geometry, solver, exhaustion.
    #[arg(long, default_value = "paper")]
    suite: String,
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    let results = run_suite(&args.suite).map_err(|e| CliError::Config(format!("{e}")))?;
    let mut failed = 0usize;
    for check in &results {
        let verdict = if check.passed {
            "pass"
        } else {
            failed += 1;
            "fail"
        };
        println!("check {}: {verdict} ({})", check.name, check.detail);
    }
    println!(
        "suite {}: {}/{} checks passed (sampling seed {SUITE_SEED})",
        args.suite,
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        Err(CliError::Check(format!(
            "{failed} of {} checks failed",
            results.len()
        )))
    } else {
        Ok(())
    }
}
