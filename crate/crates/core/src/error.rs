use thiserror::Error;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tanh pole: cosh(alpha/2) vanishes at alpha = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid evaluation context: {0}")]
    InvalidContext(String),

    #[error("quadrature failed on [{lower}, {upper}]: error {error:.3e} after {nodes} nodes")]
    QuadratureFailure {
        lower: f64,
        upper: f64,
        error: f64,
        nodes: usize,
    },

    #[error("1 + exp(Q) is singular on the transverse plane (e0*g*B = {omega})")]
    ResonantQ { omega: f64 },

    #[error("transverse kernel caustic: |sin(e0 g B / 2)| < 1e-10 at e0 = {re} + {im}i")]
    KernelSingularity { re: f64, im: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("proper-time ray passes within {distance:.3e} of the caustic at e0 = {caustic}")]
    ContourCaustic { caustic: f64, distance: f64 },

    #[error("proper-time integral diverges along the ray: {0}")]
    DivergentRay(String),

    #[error("finite-difference step calibration failed in direction {direction}: estimates differ by {discrepancy:.3}")]
    StepCalibrationFailure { direction: usize, discrepancy: f64 },

    #[error("sliced quadratic form is singular (pivot {pivot} of {size})")]
    SingularForm { pivot: usize, size: usize },

    #[error("resonant denominator in closed form: {0}")]
    ResonantDenominator(String),
}

impl Error {
    /// Stable process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidProfile(_) | Error::InvalidContext(_) => 2,
            Error::Pole { .. }
            | Error::ResonantQ { .. }
            | Error::KernelSingularity { .. }
            | Error::DivisionByZero(_)
            | Error::ContourCaustic { .. }
            | Error::DivergentRay(_)
            | Error::SingularForm { .. }
            | Error::ResonantDenominator(_) => 3,
            Error::QuadratureFailure { .. } | Error::StepCalibrationFailure { .. } => 4,
        }
    }

    /// Variant name, used as a row status in tabular output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "Pole",
            Error::InvalidProfile(_) => "InvalidProfile",
            Error::InvalidContext(_) => "InvalidContext",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::ResonantQ { .. } => "ResonantQ",
            Error::KernelSingularity { .. } => "KernelSingularity",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::ContourCaustic { .. } => "ContourCaustic",
            Error::DivergentRay(_) => "DivergentRay",
            Error::StepCalibrationFailure { .. } => "StepCalibrationFailure",
            Error::SingularForm { .. } => "SingularForm",
            Error::ResonantDenominator(_) => "ResonantDenominator",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
