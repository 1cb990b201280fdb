use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge within {terms} terms (last term {last:e})")]
    NonConvergence { terms: usize, last: f64 },
    #[error("quadrature did not converge after {0} subdivisions")]
    QuadratureDepth(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("group relation failed: {relation} (residual {residual:e})")]
    RelationFailure { relation: String, residual: f64 },
    #[error("expected exactly one root in ({lo}, {hi}), found {found}")]
    RootCount { lo: f64, hi: f64, found: usize },
    #[error("mismatch against tabulated value: {what} (residual {residual:e})")]
    TableMismatch { what: String, residual: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("enumeration cap of {0} elements exceeded")]
    EnumerationCap(usize),
    #[error("singular matrix in {0}")]
    Singular(String),
    #[error("ill-conditioned sample set after {0} resamplings")]
    IllConditioned(usize),
    #[error("rank-deficient least-squares system ({rank} < {need})")]
    RankDeficient { rank: usize, need: usize },
    #[error("non-negligible imaginary part {0:e} in Wick integral")]
    ImaginaryResidue(f64),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("step-size instability in simulation: {0}")]
    Unstable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
