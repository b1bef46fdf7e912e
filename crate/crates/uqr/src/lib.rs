//! Command-line front end: text formats, index selection and the `query`,
//! `validate` and `bench` commands.

pub mod bench;
pub mod format;
pub mod indexes;
pub mod query;
pub mod validate;

use std::fmt;

pub use format::ParseError;
pub use indexes::{EngineChoice, IndexChoice, Indexes, Unavailable};

/// A command failure and its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1.
    Mismatch(usize),
    /// Exit 2: unreadable or malformed input.
    Input(String),
    /// Exit 3: the chosen index cannot answer a query.
    Capability(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Mismatch(_) => 1,
            Self::Input(_) => 2,
            Self::Capability(_) => 3,
        }
    }

    pub fn input(file: &str, e: impl fmt::Display) -> Self {
        Self::Input(format!("{file}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mismatch(m) => write!(f, "{m} mismatches against the oracle"),
            Self::Input(m) | Self::Capability(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}
