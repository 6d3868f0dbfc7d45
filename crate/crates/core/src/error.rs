use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("slope must be positive, got {0}")]
    NonPositiveSlope(String),

    #[error("value rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("polynomial is zero")]
    ZeroPolynomial,

    #[error("phi must be monic of degree at least 1, got {0}")]
    InvalidPhi(String),

    #[error("phi = {phi} is reducible modulo {p}; the residue of phi must be irreducible")]
    PhiReducible { phi: String, p: u64 },

    #[error("Newton polygon needs at least two points with finite valuation")]
    DegeneratePolygon,

    #[error("coefficient a_{index} has negative valuation; coefficients must lie in the valuation ring")]
    NegativeValuation { index: usize },

    #[error("leading coefficient a_{0} has infinite valuation")]
    ZeroLeading(usize),

    #[error("no coefficient is a unit (p divides every a_i); strip the content or try another prime")]
    NoUnitCoefficient,

    #[error("theorem inapplicable: the constant term a_0 is a unit (s = 0)")]
    UnitConstantTerm,

    #[error("theorem inapplicable: no nonzero coefficient a_i with i < s = {s}")]
    NoLowerCoefficient { s: usize },

    #[error("hypothesis fails: {0}")]
    HypothesisFailed(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("inconsistent degree partitions: no partition of {0} coarsens every input")]
    InconsistentPartitions(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True when the input was well formed but the bound's hypotheses do not hold.
    pub fn is_inapplicable(&self) -> bool {
        matches!(
            self,
            Error::PhiReducible { .. }
                | Error::NoUnitCoefficient
                | Error::UnitConstantTerm
                | Error::NoLowerCoefficient { .. }
                | Error::HypothesisFailed(_)
        )
    }
}
