use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LppError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("degenerate target {0}: exit points are only defined in the open quadrant of the corner")]
    DegenerateTarget(String),
    #[error("unstable queue: {0}")]
    Instability(String),
}

pub type Result<T> = std::result::Result<T, LppError>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(LppError::Parameter(msg.into()))
}
