//! Staged exhaustion runs from configuration files. Every config is parsed
//! and validated before anything executes; runs then proceed independently,
//! each into its own directory, and the classification lines print in the
//! order the configs were given regardless of worker scheduling. A truncated
//! run keeps its partial outputs and turns the exit code.

use clap::Args;
use serde::Serialize;
use sigma_yamabe::exhaustion::{
    run_negative, run_negative_degenerate, run_positive, ExhaustionPlan, ExhaustionReport,
    PositiveComparison,
};
use sigma_yamabe::report::{classification_label, run_kind_label, solution_csv, to_json,
    ExhaustionSummary};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{output_root, run_dir, run_id_for, write_file};
use crate::config::{ExperimentConfig, RunSpec};
use crate::CliError;

#[derive(Args)]
pub struct ExhaustArgs {
    /// Experiment configuration file; repeat for a batch.
    #[arg(long, required = true)]
    config: Vec<String>,
    /// Worker threads for a batch.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output root directory; overrides the environment default.
    #[arg(long)]
    output_root: Option<String>,
}

struct PreparedRun {
    run_id: String,
    plan: ExhaustionPlan,
    kind: RunSpec,
    boundary_level: f64,
    comparison: PositiveComparison,
    formats: Vec<String>,
    /// Round-tripped configuration, echoed into the run directory.
    config_echo: String,
}

struct RunOutcome {
    line: String,
    truncated: Option<String>,
}

#[derive(Serialize)]
struct ExhaustManifest {
    command: &'static str,
    run_id: String,
    kind: String,
    classification: String,
    stages_completed: usize,
    truncated: bool,
    failure: Option<String>,
    files: Vec<String>,
}

fn write_outputs(
    run: &PreparedRun,
    report: &ExhaustionReport,
    dir: &Path,
) -> Result<(), CliError> {
    let stage_boundary = match run.kind {
        RunSpec::Positive => run.boundary_level,
        _ => 0.0,
    };
    let mut files = Vec::new();
    if run.formats.iter().any(|f| f == "csv") {
        for (j, record) in report.stages.iter().enumerate() {
            let problem = run
                .plan
                .stage_problem(j, stage_boundary)
                .map_err(|e| CliError::Io(format!("stage table: {e}")))?;
            let rows = problem
                .solution_rows(&record.values)
                .map_err(|e| CliError::Io(format!("stage table: {e}")))?;
            let name = format!("stage-{}.csv", j + 1);
            write_file(&dir.join(&name), &solution_csv(&rows))?;
            files.push(name);
        }
    }
    if run.formats.iter().any(|f| f == "json") {
        let summary = ExhaustionSummary::new(report);
        let json = to_json(&summary).map_err(|e| CliError::Io(format!("report: {e}")))?;
        write_file(&dir.join("report.json"), &json)?;
        files.push("report.json".to_string());
        write_file(&dir.join("config.json"), &run.config_echo)?;
        files.push("config.json".to_string());
    }
    let manifest = ExhaustManifest {
        command: "exhaust",
        run_id: run.run_id.clone(),
        kind: run_kind_label(report.kind).to_string(),
        classification: classification_label(report.classification).to_string(),
        stages_completed: report.stages.len(),
        truncated: report.truncated,
        failure: report.failure.clone(),
        files,
    };
    let json = to_json(&manifest).map_err(|e| CliError::Io(format!("summary: {e}")))?;
    write_file(&dir.join("summary.json"), &json)
}

fn execute(run: &PreparedRun, root: &Path) -> Result<RunOutcome, CliError> {
    let report = match run.kind {
        RunSpec::Negative => run_negative(&run.plan),
        RunSpec::NegativeDegenerate => run_negative_degenerate(&run.plan),
        RunSpec::Positive => {
            run_positive(&run.plan, run.boundary_level, run.comparison.clone())
        }
    }
    .map_err(|e| CliError::Infeasible(format!("{}: {e}", run.run_id)))?;
    let dir = run_dir(root, &run.run_id)?;
    write_outputs(run, &report, &dir)?;
    let label = classification_label(report.classification);
    Ok(RunOutcome {
        line: if report.truncated {
            format!(
                "{}: {} (truncated after {} stages)",
                run.run_id,
                label,
                report.stages.len()
            )
        } else {
            format!("{}: {}", run.run_id, label)
        },
        truncated: report.truncated.then(|| {
            report
                .failure
                .clone()
                .unwrap_or_else(|| "a stage failed".into())
        }),
    })
}

pub fn run(args: ExhaustArgs) -> Result<(), CliError> {
    if args.jobs == 0 {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let mut runs = Vec::new();
    for path_text in &args.config {
        let path = Path::new(path_text);
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        let config = ExperimentConfig::from_json(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let formats = config.formats()?;
        let run_id = run_id_for(None, config.output.directory.as_deref(), path)?;
        let (plan, kind, boundary_level, comparison) = config
            .exhaustion_plan()
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        runs.push(PreparedRun {
            run_id,
            plan,
            kind,
            boundary_level,
            comparison,
            formats,
            config_echo: config.to_json()?,
        });
    }
    for (i, run) in runs.iter().enumerate() {
        if runs[..i].iter().any(|other| other.run_id == run.run_id) {
            return Err(CliError::Config(format!(
                "run id {:?} appears twice; give the configs distinct output directories",
                run.run_id
            )));
        }
    }

    let root: PathBuf = output_root(args.output_root.as_deref());
    let outcomes: Vec<Mutex<Option<Result<RunOutcome, CliError>>>> =
        runs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = args.jobs.min(runs.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= runs.len() {
                    break;
                }
                let outcome = execute(&runs[i], &root);
                *outcomes[i].lock().expect("no worker panicked") = Some(outcome);
            });
        }
    });

    let mut first_error = None;
    for (run, slot) in runs.iter().zip(outcomes) {
        let outcome = slot
            .into_inner()
            .expect("no worker panicked")
            .expect("every run was claimed by a worker");
        match outcome {
            Ok(done) => {
                println!("{}", done.line);
                if let Some(failure) = done.truncated {
                    first_error.get_or_insert(CliError::Infeasible(format!(
                        "{}: {failure}",
                        run.run_id
                    )));
                }
            }
            Err(e) => {
                println!("{}: failed", run.run_id);
                first_error.get_or_insert(e);
            }
        }
    }
    match first_error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
