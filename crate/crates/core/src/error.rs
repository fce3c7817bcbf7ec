use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid extents: {0}")]
    InvalidExtents(String),

    #[error("counts too small: nx={nx}, ny={ny} (need >= 4)")]
    CountsTooSmall { nx: usize, ny: usize },

    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },

    #[error("parameter t={t} outside [0, {t_max}]")]
    OutOfRange { t: f64, t_max: f64 },

    #[error("inversion did not converge for point ({x}, {y})")]
    NoConvergence { x: f64, y: f64 },

    #[error("no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")]
    NoBracket { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("root finding failed in {region} at s={s}: {reason}")]
    RootFailure {
        region: String,
        s: f64,
        reason: String,
    },

    #[error("invalid jump trace at vertex {vertex}: {reason}")]
    InvalidTrace { vertex: usize, reason: String },

    #[error("foliation check failed for family '{label}': {reason}")]
    Foliation { label: String, reason: String },

    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),

    #[error("missing boundary condition: {0}")]
    MissingBoundary(String),

    #[error("unit-length constraint violated at sample {index}: |u| = {norm}")]
    NotUnit { index: usize, norm: f64 },

    #[error("profile under-resolved: n={n} but need at least {needed}")]
    UnderResolved { n: usize, needed: usize },

    #[error("time step underflow (dt={dt})")]
    DtUnderflow { dt: f64 },

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
