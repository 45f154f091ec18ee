//! CLI error taxonomy, mapped onto exit codes:
//! 2 config error, 3 data error, 4 judge/transport error, 1 anything else.

use eureka::data::DataError;
use eureka::glm::GlmError;
use eureka::judge::JudgeError;
use eureka::ranking::RankingError;
use eureka::selection::SelectionError;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(DataError),
    Judge(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Judge(_) => 4,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Data(e) => write!(f, "data error: {e}"),
            CliError::Judge(m) => write!(f, "judge error: {m}"),
            CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e)
    }
}

impl From<JudgeError> for CliError {
    fn from(e: JudgeError) -> Self {
        CliError::Judge(e.to_string())
    }
}

impl From<RankingError> for CliError {
    fn from(e: RankingError) -> Self {
        match e {
            RankingError::OracleFailure { .. } => CliError::Judge(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SelectionError> for CliError {
    fn from(e: SelectionError) -> Self {
        match e {
            SelectionError::Data(d) => CliError::Data(d),
            SelectionError::Glm(g) => CliError::Internal(g.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<GlmError> for CliError {
    fn from(e: GlmError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("I/O error: {e}"))
    }
}
