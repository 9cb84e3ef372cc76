use thiserror::Error;

/// Domain errors shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DivisionByZero: {0}")]
    DivisionByZero(String),
    #[error("InexactDivision: {0}")]
    InexactDivision(String),
    #[error("NotNeighbors: {0} and {1} are not Farey neighbors")]
    NotNeighbors(String, String),
    #[error("InconsistentDiscriminant: {0}")]
    InconsistentDiscriminant(String),
    #[error("EvalAtZero: variable x{0} is zero but carries a negative exponent")]
    EvalAtZero(usize),
    #[error("SInBody: S may only appear as the leading letter")]
    SInBody,
    #[error("TooLarge: {0} tiles exceed the brute-force cap of {1}")]
    TooLarge(usize, usize),
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, used in CLI error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::InexactDivision(_) => "InexactDivision",
            Error::NotNeighbors(..) => "NotNeighbors",
            Error::InconsistentDiscriminant(_) => "InconsistentDiscriminant",
            Error::EvalAtZero(_) => "EvalAtZero",
            Error::SInBody => "SInBody",
            Error::TooLarge(..) => "TooLarge",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
