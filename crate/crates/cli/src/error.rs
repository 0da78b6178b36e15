use thiserror::Error;
use tribilliard_core::analysis::AnalysisError;
use tribilliard_core::enumeration::EnumerationError;
use tribilliard_core::measure::MeasureError;
use tribilliard_core::partitions::PartitionError;
use tribilliard_core::trigpoly::TrigPolyError;
use tribilliard_core::GeometryError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    TrigPoly(#[from] TrigPolyError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// A lemma check found data contradicting it.
    pub fn is_counterexample(&self) -> bool {
        matches!(
            self,
            CliError::Partition(PartitionError::SearchFailed { .. })
        )
    }
}
