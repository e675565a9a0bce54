use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A coefficient is non-finite or an off-diagonal element is not positive.
    InvalidModel {
        index: Option<usize>,
        reason: &'static str,
    },
    /// Index too large to be represented exactly in the coefficient formulas.
    IndexOverflow {
        index: usize,
    },
    /// Only periods 1, 2 and 3 have closed-form terminators.
    UnsupportedPeriod {
        period: usize,
    },
    /// The probed coefficients still move by at least the tolerance.
    NotConverged {
        period: usize,
        change: f64,
    },
    /// The selected terminator root sits at infinity (a pole of the tail).
    DegenerateQuadratic,
    /// Fewer than 2K distinct band edges were found.
    MergedBands {
        roots: Vec<f64>,
    },
    /// A continued-fraction denominator vanished on the real axis.
    PivotBreakdown {
        index: usize,
    },
    /// The second-kind denominator vanished.
    DivideByZero,
    /// Extrapolated pole weight is negative beyond roundoff.
    NegativeWeight {
        energy: f64,
        weight: f64,
    },
    /// Density came out negative beyond roundoff.
    NegativeDensity {
        energy: f64,
        value: f64,
    },
    /// Continuum plus discrete mass missed one by more than the tolerance.
    SumRuleViolated {
        continuum: f64,
        discrete: f64,
    },
    /// The operation needs finite asymptotics but the model grows without bound.
    UnboundedTail,
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModel { index: Some(n), reason } => {
                write!(f, "invalid model at n = {n}: {reason}")
            }
            Error::InvalidModel { index: None, reason } => write!(f, "invalid model: {reason}"),
            Error::IndexOverflow { index } => write!(f, "coefficient index {index} overflows"),
            Error::UnsupportedPeriod { period } => {
                write!(f, "period K = {period} is not supported (K must be 1, 2 or 3)")
            }
            Error::NotConverged { period, change } => write!(
                f,
                "coefficients not converged for period {period}: successive periods differ by {change:e}"
            ),
            Error::DegenerateQuadratic => write!(f, "terminator has a pole at this energy"),
            Error::MergedBands { roots } => write!(
                f,
                "bands merged: found {} distinct band edges {:?}",
                roots.len(),
                roots
            ),
            Error::PivotBreakdown { index } => {
                write!(f, "continued fraction denominator vanished at level {index}")
            }
            Error::DivideByZero => write!(f, "second-kind denominator vanished"),
            Error::NegativeWeight { energy, weight } => {
                write!(f, "negative pole weight {weight:e} at E = {energy}")
            }
            Error::NegativeDensity { energy, value } => {
                write!(f, "negative density {value:e} at E = {energy}")
            }
            Error::SumRuleViolated { continuum, discrete } => write!(
                f,
                "sum rule violated: continuum {continuum} + discrete {discrete} = {}",
                continuum + discrete
            ),
            Error::UnboundedTail => write!(f, "model has unbounded coefficients"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
