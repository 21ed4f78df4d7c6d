use fractal_sandpile::experiments::ExperimentError;
use fractal_sandpile::group::GroupError;
use fractal_sandpile::io::IoError;
use fractal_sandpile::{GraphError, SandpileError};

pub const USAGE: u8 = 2;
pub const RESOURCE: u8 = 3;
pub const ARITHMETIC: u8 = 4;
pub const THEOREM: u8 = 5;
const OTHER: u8 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: USAGE, message: message.into() }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::LevelCap { .. } => RESOURCE,
            _ => USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<SandpileError> for CliError {
    fn from(e: SandpileError) -> Self {
        let code = match &e {
            SandpileError::Graph(g) => return g.clone().into(),
            SandpileError::Overflow { .. } => ARITHMETIC,
            SandpileError::StepLimit(_) => RESOURCE,
            SandpileError::Length { .. } | SandpileError::Unstable(_) => USAGE,
            SandpileError::Internal(_) => OTHER,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        let code = match &e {
            GroupError::Graph(g) => return g.clone().into(),
            GroupError::Shape(_) => USAGE,
            GroupError::Singular | GroupError::FactorBound(_) | GroupError::NonIntegral(_) => ARITHMETIC,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        if e.is_resource() {
            return CliError { code: RESOURCE, message: e.to_string() };
        }
        match e {
            ExperimentError::Graph(g) => g.into(),
            ExperimentError::Sandpile(s) => s.into(),
            ExperimentError::Group(g) => g.into(),
            ExperimentError::TheoremViolation(_) => CliError { code: THEOREM, message: e.to_string() },
            _ => CliError { code: USAGE, message: e.to_string() },
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let code = match &e {
            IoError::Graph(g) => return g.clone().into(),
            IoError::MissingCoords | IoError::Json(_) | IoError::Csv(_) | IoError::Format(_) => USAGE,
            IoError::Io(_) => OTHER,
        };
        CliError { code, message: e.to_string() }
    }
}
