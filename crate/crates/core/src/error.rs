use thiserror::Error;

/// Errors shared by every numerical module in the crate.
///
/// The three variants mirror the three failure modes of the library surface:
/// inputs outside an operation's domain, quadrature that could not reach the
/// requested tolerance (keeping the best estimate), and integrals detected to
/// diverge (which for the counterexample machinery is a finding, not a bug).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("accuracy error: {message} (best estimate {best:e}, error estimate {err_estimate:e})")]
    Accuracy {
        message: String,
        best: f64,
        err_estimate: f64,
    },

    #[error("divergence detected: {0}")]
    Divergence(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn accuracy(msg: impl Into<String>, best: f64, err_estimate: f64) -> Self {
        Error::Accuracy {
            message: msg.into(),
            best,
            err_estimate,
        }
    }

    pub fn divergence(msg: impl Into<String>) -> Self {
        Error::Divergence(msg.into())
    }

    /// Best available numerical estimate, if the error carries one.
    pub fn best_estimate(&self) -> Option<f64> {
        match self {
            Error::Accuracy { best, .. } => Some(*best),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
