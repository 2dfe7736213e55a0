use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("arbitrage: {0}")]
    Arbitrage(String),

    #[error("malformed epigraph: the upward direction is not a recession direction")]
    MalformedEpigraph,

    #[error("ordering cone contains a line; the geometric duality route needs a line-free cone")]
    OrderingConeHasLines,

    #[error(
        "solvency cone at node {node} contains a line; the so-called liquidation map reduction \
         is not implemented"
    )]
    LiquidationMapUnsupported { node: String },

    #[error("not a superhedging endowment at node {node} (time {time})")]
    NotSuperhedging { node: String, time: usize },

    #[error("strategy check failed: {0}")]
    StrategyViolation(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
