use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical guards (`Gapless`, `DegenerateDenominator`) carry the offending
/// magnitude so callers can report how close the input sat to the bad set.
#[derive(Debug, Error)]
pub enum PtError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The quasiparticle gap closed below tolerance; derivative quantities
    /// are undefined on the gapless locus {eta = 0, eta^2 + xi^2 >= 1}.
    #[error("gapless point: min |eps1| = {min_eps:.3e} below tolerance {tol:.1e}")]
    Gapless { min_eps: f64, tol: f64 },

    /// An eigenvector normalization denominator (eps +- 2 i xi or
    /// eps +- 2 eta) fell below tolerance.
    #[error("degenerate denominator {which}: |value| = {magnitude:.3e}")]
    DegenerateDenominator { which: &'static str, magnitude: f64 },

    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),

    #[error("matrix dimension {dim} exceeds cap {cap}")]
    SizeCap { dim: usize, cap: usize },

    /// No component of an eigenvector was large enough to anchor the
    /// phase gauge.
    #[error("gauge fixing failed: {0}")]
    GaugeFailure(String),

    #[error("scan grid is empty")]
    EmptyGrid,

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PtError>;

impl PtError {
    /// Stable short code, used in scan output error columns and by the FFI
    /// status mapping.
    pub fn code(&self) -> &'static str {
        match self {
            PtError::InvalidArgument(_) => "invalid_argument",
            PtError::Gapless { .. } => "gapless",
            PtError::DegenerateDenominator { .. } => "degenerate",
            PtError::NonConvergence(_) => "nonconvergence",
            PtError::SizeCap { .. } => "size_cap",
            PtError::GaugeFailure(_) => "gauge_failure",
            PtError::EmptyGrid => "empty_grid",
            PtError::Config(_) => "config",
            PtError::Io(_) => "io",
        }
    }
}
