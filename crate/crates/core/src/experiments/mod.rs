//! Growth, periodicity and identity studies with machine-readable records.

mod growth;
mod identity;
mod periodicity;

use thiserror::Error;

use crate::graph::GraphError;
use crate::group::GroupError;
use crate::sandpile::SandpileError;

pub use growth::{exponent_fit, growth_run, Fit, GrowthOptions, GrowthRecord, LEVEL_CAP_ENV};
pub use identity::{
    conjectured_k, identity_survey, ring_check, sgc_identity_check, IdentityRecord, RingCheck, SgcIdentityReport,
};
pub use periodicity::{
    periodicity_run, state_digest, PeriodicityOptions, PeriodicityRecord, PeriodicityReport,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sandpile(#[from] SandpileError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("auto-grow needs level {needed}, above the cap of {cap} (set {LEVEL_CAP_ENV} to raise it)")]
    LevelCap { needed: u32, cap: u32 },
    #[error("cycle detection stored {0} states without a repeat")]
    StateCap(usize),
    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl ExperimentError {
    /// Resource exhaustion rather than bad input or broken arithmetic.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            ExperimentError::LevelCap { .. }
                | ExperimentError::StateCap(_)
                | ExperimentError::Graph(GraphError::LevelCap { .. })
                | ExperimentError::Sandpile(SandpileError::StepLimit(_))
        )
    }
}
