//! Verification harness and JSON front end for `vlat-core`.

pub mod cli;
pub mod json;
pub mod random;
pub mod suites;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Spec(#[from] vlat_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Exit status: 0 pass, 1 mathematical violation, 2 input or config error.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const INPUT: i32 = 2;
}
