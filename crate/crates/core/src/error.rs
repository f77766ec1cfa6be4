use thiserror::Error;

/// Errors raised by model construction and by the numerical primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("event priors must sum to 1 (got {h0} + {h1})")]
    PriorsNotNormalized { h0: f64, h1: f64 },

    #[error("{which} trust pmf sums to {sum}, expected 1")]
    PmfNotNormalized { which: &'static str, sum: f64 },

    #[error("trust pmf has {legit} legitimate entries but {malicious} malicious entries")]
    AlphabetMismatch { legit: usize, malicious: usize },

    #[error("trust alphabet is empty")]
    EmptyAlphabet,

    #[error("trust symbol {index} has identical likelihood under both classes")]
    UninformativeSymbol { index: usize },

    #[error("trust symbol {symbol} is not in an alphabet of size {size}")]
    UnknownSymbol { symbol: usize, size: usize },

    #[error("sequence lengths differ: {what} ({left} vs {right})")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("network must contain at least one robot")]
    EmptyNetwork,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("bound not applicable: {0}")]
    Validity(String),

    #[error("exhaustive search refused for N = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
