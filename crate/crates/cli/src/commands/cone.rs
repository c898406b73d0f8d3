//! Cone diagnostics from command-line flags: the critical degenerate-ray
//! ratio, membership of an eigenvalue vector, and the deformation a
//! trace-modified cone applies before its elementary base sees the vector.

use clap::{Args, Subcommand};
use sigma_yamabe::cones::{ConeSpec, Containment};

use crate::CliError;

#[derive(Args)]
pub struct ConeArgs {
    #[command(subcommand)]
    action: ConeAction,
}

#[derive(Subcommand)]
enum ConeAction {
    /// Critical ratio: the largest mu keeping (-mu, 1, ..., 1) in the cone.
    Mu(SpecArgs),
    /// Membership verdict for an eigenvalue vector.
    Contains {
        #[command(flatten)]
        spec: SpecArgs,
        /// Eigenvalues, one per dimension, after `--`.
        #[arg(last = true, num_args = 1.., allow_negative_numbers = true)]
        lambda: Vec<f64>,
    },
    /// Deformed vector the innermost elementary cone receives.
    Deform {
        #[command(flatten)]
        spec: SpecArgs,
        /// Eigenvalues, one per dimension, after `--`.
        #[arg(last = true, num_args = 1.., allow_negative_numbers = true)]
        lambda: Vec<f64>,
    },
}

#[derive(Args)]
pub struct SpecArgs {
    /// Cone family: gamma-k or tau.
    #[arg(long)]
    family: String,
    /// Eigenvalue dimension.
    #[arg(long)]
    n: usize,
    /// Order of the elementary symmetric base.
    #[arg(long)]
    k: usize,
    /// Modification weight in (0, 1]; tau family only.
    #[arg(long)]
    tau: Option<f64>,
    /// Base family of a tau cone; gamma-k is the only base.
    #[arg(long)]
    base: Option<String>,
}

impl SpecArgs {
    fn build(&self) -> Result<ConeSpec, CliError> {
        if let Some(base) = &self.base {
            if self.family != "tau" {
                return Err(CliError::Config(
                    "--base applies to the tau family only".into(),
                ));
            }
            if base != "gamma-k" {
                return Err(CliError::Config(format!(
                    "unknown base family {base:?}; gamma-k is the only base"
                )));
            }
        }
        cone_from_parts(&self.family, self.n, self.k, self.tau)
    }
}

/// Shared flag-to-cone builder; `curvature` reuses it without base flags.
pub fn cone_from_parts(
    family: &str,
    n: usize,
    k: usize,
    tau: Option<f64>,
) -> Result<ConeSpec, CliError> {
    let elementary =
        ConeSpec::elementary(n, k).map_err(|e| CliError::Config(format!("cone: {e}")))?;
    match (family, tau) {
        ("gamma-k", None) => Ok(elementary),
        ("gamma-k", Some(_)) => Err(CliError::Config(
            "--tau applies to the tau family only".into(),
        )),
        ("tau", Some(tau)) => ConeSpec::tau_modified(elementary, tau)
            .map_err(|e| CliError::Config(format!("cone: {e}"))),
        ("tau", None) => Err(CliError::Config("the tau family needs --tau".into())),
        (other, _) => Err(CliError::Config(format!(
            "unknown cone family {other:?}; expected gamma-k or tau"
        ))),
    }
}

fn check_length(n: usize, lambda: &[f64]) -> Result<(), CliError> {
    if lambda.len() != n {
        return Err(CliError::Config(format!(
            "expected {n} eigenvalues, got {}",
            lambda.len()
        )));
    }
    Ok(())
}

pub fn run(args: ConeArgs) -> Result<(), CliError> {
    match args.action {
        ConeAction::Mu(spec_args) => {
            let is_tau = spec_args.family == "tau";
            let cone = spec_args.build()?;
            let mu = cone.mu_plus();
            println!("{mu}");
            if is_tau {
                println!("mu > 1: {}", mu > 1.0);
            }
        }
        ConeAction::Contains { spec, lambda } => {
            let cone = spec.build()?;
            check_length(cone.dimension(), &lambda)?;
            let verdict = cone
                .contains(&lambda)
                .map_err(|e| CliError::Config(format!("{e}")))?;
            println!(
                "{}",
                match verdict {
                    Containment::Interior => "interior",
                    Containment::Boundary => "boundary",
                    Containment::Exterior => "exterior",
                }
            );
        }
        ConeAction::Deform { spec, lambda } => {
            let cone = spec.build()?;
            check_length(cone.dimension(), &lambda)?;
            let deformed = cone
                .deformed(&lambda)
                .map_err(|e| CliError::Config(format!("{e}")))?;
            let parts: Vec<String> = deformed.iter().map(|v| format!("{v}")).collect();
            println!("{}", parts.join(" "));
        }
    }
    Ok(())
}
