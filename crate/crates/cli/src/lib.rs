//! Driver for the `repstab` binary: argument parsing, caching, report
//! rendering and the built-in check suite.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod report;
pub mod selftest;

use repstab_core::algebra::Family;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIZE_GUARD: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] repstab_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use repstab_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(E::SizeGuard { .. }) => EXIT_SIZE_GUARD,
            CliError::Core(E::UnknownFamily(_) | E::Parse(_)) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) => EXIT_CHECK_FAILED,
        }
    }
}

/// The single family a command operates on.
pub(crate) fn single_family(f: &config::Families) -> Result<Family, CliError> {
    match f.0.as_slice() {
        [one] => Ok(*one),
        _ => Err(CliError::Usage("this command takes exactly one family".into())),
    }
}
