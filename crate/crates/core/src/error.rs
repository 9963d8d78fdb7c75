use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fluid: gamma = {gamma}, pi_inf = {pi_inf} (need gamma > 1, pi_inf >= 0)")]
    InvalidFluid { gamma: f64, pi_inf: f64 },

    #[error("invalid state at cell {cell:?}: {reason}")]
    InvalidState {
        cell: (usize, usize),
        reason: &'static str,
    },

    #[error("solver aborted at t = {time} (stage {stage}): invalid state at cell {cell:?}: {reason}")]
    SolverAbort {
        time: f64,
        stage: u8,
        cell: (usize, usize),
        reason: &'static str,
    },

    #[error("unknown problem `{name}`; available: {available}")]
    UnknownProblem { name: String, available: String },

    /// `line` is 1-based; 0 means the error is not tied to a line.
    #[error("config error{}: {message}", at_line(*line))]
    Config { line: usize, message: String },

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed snapshot: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

fn at_line(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" on line {line}")
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
