//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("labels and dims length mismatch ({labels} labels, {dims} dims)")]
    LabelDimMismatch { labels: usize, dims: usize },
    #[error("subsystem dimension {0} < 2")]
    SubsystemTooSmall(usize),
    #[error("total dimension {0} exceeds guard {1}")]
    DimensionGuard(usize, usize),
    #[error("operator dimension {got} does not match space dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("matrix not Hermitian: max |A - A^dag| entry = {0:.3e}")]
    NotHermitian(f64),
    #[error("trace deviates from 1 by {0:.3e}")]
    TraceDeviation(f64),
    #[error("matrix not positive semidefinite: min eigenvalue = {0:.3e}")]
    NotPositive(f64),
    #[error("state vector norm deviates from 1 by {0:.3e}")]
    NormDeviation(f64),
    #[error("Kraus channel incomplete: max |sum E^dag E - I| entry = {0:.3e}")]
    IncompleteChannel(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coupler junction phase too close to pi/2: |cos(delta)| = {0:.3e}")]
    SingularCoupler(f64),
    #[error("confusion matrix not invertible: determinant = {0:.3e}")]
    SingularConfusion(f64),
    #[error("integration failed at t = {t_ns:.3} ns: {diagnostic}")]
    Integration { t_ns: f64, diagnostic: String },
    #[error("post-selected outcome `{0}` has zero probability; post-state undefined")]
    ZeroProbabilityOutcome(String),
    #[error("degenerate input: trace non-positive after eigenvalue clipping")]
    DegenerateInput,
    #[error("missing tomography setting {0:?}")]
    MissingSetting(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("unknown Bell-state label `{0}`")]
    UnknownBellLabel(String),
    #[error("fit failed: {0}")]
    FitFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
