//! Std companion to `filterlc-core`: file formats, parallel bound
//! computation, the verification harness, curve fitting and the CLI.

pub mod cli;
pub mod fit;
pub mod format;
pub mod parallel;
pub mod verify;

use thiserror::Error;

/// Reference bounds `(L, k, bound)`.
pub const FAST_TIER: [(u32, u32, u64); 4] = [(11, 6, 242), (17, 9, 3128), (23, 12, 8349), (29, 15, 22330)];
pub const SLOW_TIER: [(u32, u32, u64); 4] = [(37, 19, 47952), (43, 22, 75852), (47, 24, 99405), (53, 27, 143206)];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for bad input, 2 for a broken invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

impl From<filterlc_core::Error> for CliError {
    fn from(e: filterlc_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
