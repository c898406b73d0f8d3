//! One Dirichlet solve from a configuration file: build the problem, run
//! the damped Newton iteration, and write the solution table with a JSON
//! summary into the run directory. The exit code follows convergence, so a
//! stalled iterate still leaves its files behind for inspection.

use clap::Args;
use serde::Serialize;
use sigma_yamabe::report::{format_float, solution_csv, to_json, SolveSummary};
use sigma_yamabe::solver::newton_solve;
use std::path::Path;

use super::{output_root, run_dir, run_id_for, write_file};
use crate::config::ExperimentConfig;
use crate::CliError;

#[derive(Args)]
pub struct SolveArgs {
    /// Experiment configuration file.
    #[arg(long)]
    config: String,
    /// Output root directory; overrides the environment default.
    #[arg(long)]
    output_root: Option<String>,
    /// Run directory name; overrides the config and the file stem.
    #[arg(long)]
    run_id: Option<String>,
}

#[derive(Serialize)]
struct SolveManifest {
    command: &'static str,
    run_id: String,
    solve: SolveSummary,
    max_abs_u: String,
    reference_sup_error: Option<String>,
    files: Vec<String>,
}

pub fn run(args: SolveArgs) -> Result<(), CliError> {
    let config_path = Path::new(&args.config);
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", config_path.display())))?;
    let config = ExperimentConfig::from_json(&text)?;
    let formats = config.formats()?;
    let run_id = run_id_for(
        args.run_id.as_deref(),
        config.output.directory.as_deref(),
        config_path,
    )?;
    let (problem, opts) = config.dirichlet_problem()?;

    let section = config.problem.as_ref().expect("the problem was just built");
    let radii = problem.grid().nodes();
    let guess = match &section.guess {
        Some(spec) => spec
            .build()?
            .values_on(&radii)
            .map_err(|e| CliError::Config(format!("guess: {e}")))?,
        None => {
            let right = problem.right_value();
            match problem.left_value() {
                Some(left) => {
                    let (r0, r1) = (radii[0], *radii.last().expect("grids are nonempty"));
                    radii
                        .iter()
                        .map(|&r| left + (right - left) * (r - r0) / (r1 - r0))
                        .collect()
                }
                None => vec![right; radii.len()],
            }
        }
    };

    let solution = newton_solve(&problem, &guess, &opts)
        .map_err(|e| CliError::Infeasible(format!("{run_id}: {e}")))?;

    let max_abs_u = solution.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let reference_sup_error = match &section.reference {
        Some(spec) => {
            let exact = spec
                .build()?
                .values_on(&radii)
                .map_err(|e| CliError::Config(format!("reference: {e}")))?;
            let gap = solution
                .values
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Some(format_float(gap))
        }
        None => None,
    };

    let dir = run_dir(&output_root(args.output_root.as_deref()), &run_id)?;
    let mut files = Vec::new();
    if formats.iter().any(|f| f == "csv") {
        let rows = problem
            .solution_rows(&solution.values)
            .map_err(|e| CliError::Io(format!("solution table: {e}")))?;
        write_file(&dir.join("solution.csv"), &solution_csv(&rows))?;
        files.push("solution.csv".to_string());
    }
    if formats.iter().any(|f| f == "json") {
        write_file(&dir.join("config.json"), &config.to_json()?)?;
        files.push("config.json".to_string());
        let manifest = SolveManifest {
            command: "solve",
            run_id: run_id.clone(),
            solve: SolveSummary::new(&solution),
            max_abs_u: format_float(max_abs_u),
            reference_sup_error,
            files: files.clone(),
        };
        let json = to_json(&manifest).map_err(|e| CliError::Io(format!("summary: {e}")))?;
        write_file(&dir.join("summary.json"), &json)?;
    }

    if solution.converged {
        println!(
            "{run_id}: converged in {} iterations (residual {:.3e})",
            solution.iterations, solution.residual_sup
        );
        Ok(())
    } else {
        println!(
            "{run_id}: stopped unconverged at residual {:.3e}",
            solution.residual_sup
        );
        Err(CliError::Infeasible(format!(
            "{run_id}: the iteration budget ran out at residual {:.3e}",
            solution.residual_sup
        )))
    }
}
