use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ω = {0} is outside (0, π/2]")]
    InvalidOmega(f64),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("degenerate corner: points coincide or are collinear")]
    DegenerateCorner,
    #[error("coincident points")]
    CoincidentPoints,
    #[error("probe budget exceeded: used {used}, bound {bound}")]
    BudgetExceeded { used: usize, bound: usize },
    #[error("narrow vertex encountered at probe {probe}")]
    NarrowVertexEncountered { probe: usize },
    #[error("session ω = {0} but this algorithm requires π/2")]
    OmegaMismatch(f64),
    #[error("epsilon hypothesis violated at probe {probe}")]
    EpsilonViolated { probe: usize },
    #[error("probe {probe} missed a line through two known vertices")]
    UnexpectedMiss { probe: usize },
    #[error("no progress after probe {probe}")]
    Stalled { probe: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("inconsistent answer at probe {probe}: {reason}")]
    InconsistencyFound { probe: usize, reason: String },
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
