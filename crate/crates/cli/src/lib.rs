//! Library side of the `dirac` command: config parsing, the verification
//! suite and the scenario commands. Each command renders CSV text in memory;
//! [`write_outputs`] puts the files on disk.

pub mod commands;
pub mod config;
pub mod verify;

use std::path::{Path, PathBuf};

use dirac_core::DiracError;
use thiserror::Error;

pub use commands::{run_command, Command, CommandOutput};
pub use config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] DiracError),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for anything caused by the inputs, 3 for the filesystem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            RunConfig::from_json(&text).map_err(|e| match e {
                CliError::Config(msg) => CliError::Config(format!("{}: {msg}", p.display())),
                other => other,
            })
        }
    }
}

pub fn write_outputs(out_dir: &Path, output: &CommandOutput) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (name, text) in &output.files {
        let path = out_dir.join(name);
        std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}
