use thiserror::Error;

/// Errors shared by every module in this crate.
///
/// `GroundMismatch` is structural: binary operations demand that both
/// operands live over the same ground set. `CapacityExceeded` is a refusal,
/// not a failure; exhaustive constructions carry explicit desk-scale bounds
/// and refuse inputs beyond them rather than degrade silently.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoarseError {
    #[error("operands live over different ground sets ({left} vs {right} points)")]
    GroundMismatch { left: usize, right: usize },

    #[error("point index {index} out of range for ground of {size} points")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("map table has {got} entries but the source ground has {expected} points")]
    MapNotTotal { got: usize, expected: usize },

    #[error("map value {value} out of range for target ground of {size} points")]
    MapValueOutOfRange { value: usize, size: usize },

    #[error("ground set has no metric, but the operation needs one")]
    NoMetric,

    #[error("ground set has no origin, but the operation needs one")]
    NoOrigin,

    #[error("invalid metric: {reason}")]
    InvalidMetric { reason: String },

    #[error("invalid bounded family: {reason}")]
    InvalidBornology { reason: String },

    #[error("invalid window: {reason}")]
    InvalidWindow { reason: String },

    #[error("scale {scale} is not on the window's scale grid")]
    ScaleNotOnGrid { scale: u64 },

    #[error("{what} needs {actual}, above the supported bound of {limit}")]
    CapacityExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("the hyperspace family does not contain {member}")]
    FamilyMissingMember { member: String },
}

pub type Result<T> = std::result::Result<T, CoarseError>;
