//! Command-line front end for `thermgraph-core`: closed-form evaluations,
//! simulated verification runs, plot data and the IQP certification rule.
//!
//! JSON results embed a [`RunManifest`]; CSV results carry it in a sidecar
//! file or on stderr.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};

pub use args::{Cli, Command};
pub use commands::{run, Output};
pub use error::{CliError, CliResult};
pub use manifest::RunManifest;

/// Sidecar path for a CSV written to `path`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes `out` to `path` (plus sidecar for CSV) or to stdout/stderr.
pub fn emit(out: &Output, path: Option<&Path>) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let text = out.render();
    match path {
        Some(p) => {
            std::fs::write(p, &text).map_err(io)?;
            if out.is_csv() {
                std::fs::write(manifest_path(p), out.manifest.to_json() + "\n").map_err(io)?;
            }
        }
        None => {
            std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(io)?;
            if out.is_csv() {
                eprintln!("{}", out.manifest.to_json());
            }
        }
    }
    Ok(())
}
