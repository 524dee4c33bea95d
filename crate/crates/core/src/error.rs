use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("symbol is not finite at wavevector {k:?}")]
    SingularSymbol { k: [f64; 3] },
    #[error("resolution: {0}")]
    Resolution(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("field history does not cover t = {t} (stored range [{first}, {last}])")]
    MissingHistory { t: f64, first: f64, last: f64 },
    #[error("stencil: {0}")]
    Stencil(String),
    #[error("time ordering: expected s <= t, got s = {s}, t = {t}")]
    Ordering { s: f64, t: f64 },
    #[error("missing dependency: {0}")]
    Dependency(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("wrap-around: {0}")]
    Wrap(String),
    #[error("config: {0}")]
    Config(String),
    #[error("lookup: {0}")]
    Lookup(String),
    #[error("format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
