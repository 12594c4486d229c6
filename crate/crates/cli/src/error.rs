use csd_core::density::DensityError;
use csd_core::formulas::FormulaError;
use csd_core::spec::SpecError;
use csd_core::GroupError;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{spec}: {source}")]
    Spec { spec: String, source: SpecError },
    #[error("{0}")]
    Group(#[from] GroupError),
    #[error("{0}")]
    Density(#[from] DensityError),
    #[error("{0}")]
    Formula(#[from] FormulaError),
    #[error("{0}")]
    Input(String),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Group(GroupError::OrderBound { .. } | GroupError::LatticeBound { .. })
            | CliError::Density(DensityError::Horizon { .. }) => EXIT_RESOURCE,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_CHECK_FAILED,
            _ => EXIT_INPUT,
        }
    }
}
