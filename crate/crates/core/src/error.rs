use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a function (e.g. `v <= 0`).
    Domain { what: &'static str, value: f64 },
    /// A configuration value is invalid.
    InvalidParameter { name: &'static str, reason: String },
    /// The end states violate `v_- < v_+`, `u_- > u_+`.
    EntropyCondition { v_minus: f64, v_plus: f64 },
    /// The shock is too strong for the weighted estimates (`C_* <= 0`, ...).
    Inadmissible { reason: String },
    /// The profile boundary-value solver did not converge.
    ProfileSolver { reason: String, iterations: usize, residual: f64 },
    /// The specific volume fell to or below the floor during a run.
    BlowUp { t: f64, x: f64, v: f64, v_floor: f64 },
    /// A field grew by more than the allowed factor in one step.
    Unstable { t: f64, growth: f64 },
    /// A singular matrix was met in a linear solve.
    Singular { row: usize },
    /// Not enough data for a fit or report.
    TooShort { needed: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid parameter `{name}`: {reason}"),
            Error::EntropyCondition { v_minus, v_plus } => write!(
                f,
                "entropy condition violated: need v_minus < v_plus, got v_minus={v_minus}, v_plus={v_plus}"
            ),
            Error::Inadmissible { reason } => write!(f, "inadmissible shock: {reason}"),
            Error::ProfileSolver { reason, iterations, residual } => write!(
                f,
                "profile solver failed after {iterations} iterations (residual {residual:e}): {reason}"
            ),
            Error::BlowUp { t, x, v, v_floor } => {
                write!(f, "blow-up at t={t}: v={v} <= floor {v_floor} at x={x}")
            }
            Error::Unstable { t, growth } => {
                write!(f, "instability detected at t={t}: perturbation grew {growth:.3}x in one step")
            }
            Error::Singular { row } => write!(f, "singular matrix at row {row}"),
            Error::TooShort { needed, got } => write!(f, "series too short: need {needed}, got {got}"),
        }
    }
}

impl core::error::Error for Error {}
