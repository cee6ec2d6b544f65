use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight exponent s = {s} must exceed 1/2")]
    DegenerateWeight { s: f64 },

    #[error("transition profile `{profile}` does not supply three continuous derivatives")]
    ProfileNotSmooth { profile: String },

    #[error("no weight with positive margin after {candidates} candidates (best margin {best_margin:e})")]
    NoFeasibleWeight { best_margin: f64, candidates: usize },

    #[error("energy window [{e_lo}, {e_hi}] lies below every potential branch")]
    EmptySurface { e_lo: f64, e_hi: f64 },

    #[error("dimension d = {d} is not supported (d = 2 is excluded)")]
    UnsupportedDimension { d: usize },

    #[error("scaling angle {theta} is not below the analyticity angle {limit}")]
    AngleTooLarge { theta: f64, limit: f64 },

    #[error("scaled contour is singular near r = {r}: {detail}")]
    ContourSingularity { r: f64, detail: String },

    #[error("matrix is singular to working precision (pivot {index})")]
    Singular { index: usize },

    #[error("no convergence after {iterations} iterations (estimate {estimate:e}, residual {residual:e})")]
    NoConvergence { iterations: usize, estimate: f64, residual: f64 },

    #[error("fit `{model}` is degenerate: {detail}")]
    DegenerateFit { model: String, detail: String },

    #[error("test function support [{lo}, {hi}] is not inside the grid [0, {r_max}]")]
    TestFunctionEscapesGrid { lo: f64, hi: f64, r_max: f64 },

    #[error("resonance lists do not match ({first} vs {second} candidates)")]
    UnmatchedResonance { first: usize, second: usize },

    #[error("tracked resonance lost at h = {h}")]
    TrackingLost { h: f64 },

    #[error("log-law region check needs a passing escape certificate (margin {margin:e})")]
    CertificateMissing { margin: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io { path: path.display().to_string(), message: err.to_string() }
    }
}
