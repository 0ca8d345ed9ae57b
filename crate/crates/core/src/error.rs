use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("overflow in {0}")]
    Overflow(&'static str),

    #[error("{func} did not converge: {detail}")]
    NoConvergence { func: &'static str, detail: String },

    #[error("index error: {0}")]
    Index(String),

    #[error("insufficient moment range: need indices 0..={needed}, table has 0..={available}")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("singular moment matrix (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("normalization constant must be nonzero")]
    ZeroNormalization,

    #[error("polynomial violates the exceptional condition (division remainder {remainder:e})")]
    NonzeroRemainder { remainder: f64 },

    #[error("quadrature error estimate {estimate:e} above target {target:e}")]
    Quadrature { estimate: f64, target: f64 },

    #[error("result is not a constant multiple: {0}")]
    NotConstant(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
