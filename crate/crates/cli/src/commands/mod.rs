pub mod cone;
pub mod curvature;
pub mod exhaust;
pub mod solve;
pub mod verify;

use crate::CliError;
use std::path::Path;

/// Writes a file, mapping failures to the I/O exit class.
pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Creates a run directory under the chosen output root.
pub fn run_dir(root: &Path, run_id: &str) -> Result<std::path::PathBuf, CliError> {
    let dir = root.join(run_id);
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
    Ok(dir)
}

/// Output root precedence: explicit flag, then the environment variable,
/// then the working directory.
pub fn output_root(flag: Option<&str>) -> std::path::PathBuf {
    match flag {
        Some(dir) => dir.into(),
        None => std::env::var(crate::OUTPUT_ROOT_VAR)
            .map(Into::into)
            .unwrap_or_else(|_| ".".into()),
    }
}

/// Run identifier precedence: explicit flag, then the config's output
/// directory, then the config file's stem.
pub fn run_id_for(
    flag: Option<&str>,
    configured: Option<&str>,
    config_path: &Path,
) -> Result<String, CliError> {
    if let Some(id) = flag.or(configured) {
        return Ok(id.to_string());
    }
    config_path
        .file_stem()
        .and_then(|s| s.to_str())
        .map(|s| s.to_string())
        .ok_or_else(|| {
            CliError::Config(format!(
                "cannot derive a run id from the path {}",
                config_path.display()
            ))
        })
}
