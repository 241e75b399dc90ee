//! Library side of the `kowtype` command: run configuration, the
//! verification targets and their reports, and the three commands.

pub mod checks;
pub mod commands;
pub mod config;
pub mod reference;
pub mod report;

use std::fmt;

use kowtype::catalog::CatalogError;
use kowtype::integrator::{ExportError, IntegratorError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{Overrides, RunConfig};
pub use report::{Check, Status, Summary, TargetReport, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

/// Verification targets, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Chart,
    Integrals,
    Measure,
    Quadrature,
    Separability,
    Theorem,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Chart,
        Target::Integrals,
        Target::Measure,
        Target::Quadrature,
        Target::Separability,
        Target::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Chart => "chart",
            Target::Integrals => "integrals",
            Target::Measure => "measure",
            Target::Quadrature => "quadrature",
            Target::Separability => "separability",
            Target::Theorem => "theorem",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Catalog(CatalogError::SingularState { .. })
            | CliError::Integrator(IntegratorError::SingularStart(_))
            | CliError::Integrator(IntegratorError::Singularity { .. }) => EXIT_SINGULAR,
            CliError::Catalog(_) | CliError::Integrator(IntegratorError::InvalidTolerance(_)) => EXIT_CONFIG,
            CliError::Integrator(IntegratorError::InvalidSpan(_) | IntegratorError::WrongSystem { .. }) => EXIT_CONFIG,
            _ => EXIT_CHECK_FAILED,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}
