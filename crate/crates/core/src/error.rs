use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order out of range: r = {r} (supported 1..={max})")]
    OrderOutOfRange { r: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("ideal weights unusable at this tau ({tau}): classification {classification}")]
    IdealWeightsUnusable { tau: String, classification: String },

    #[error("unphysical state: {0}")]
    State(String),

    #[error("numerical failure at step {step}, time {time:.6e}, cell {cell:?}: {reason}")]
    Numerical {
        step: usize,
        time: f64,
        cell: (usize, usize),
        reason: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code for the command-line front end: 2 for domain errors,
    /// 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OrderOutOfRange { .. }
            | Error::Domain(_)
            | Error::DivisionByZero(_)
            | Error::IdealWeightsUnusable { .. }
            | Error::Parse(_) => 2,
            Error::State(_) | Error::Numerical { .. } => 3,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_separate_bad_input_from_failed_runs() {
        assert_eq!(Error::domain("x").exit_code(), 2);
        assert_eq!(Error::Parse("x".into()).exit_code(), 2);
        assert_eq!(Error::OrderOutOfRange { r: 9, max: 6 }.exit_code(), 2);
        let failed = Error::Numerical {
            step: 3,
            time: 0.1,
            cell: (4, 5),
            reason: "negative pressure".into(),
        };
        assert_eq!(failed.exit_code(), 3);
        assert!(failed.to_string().contains("cell (4, 5)"));
        assert_eq!(Error::State("x".into()).exit_code(), 3);
        assert_eq!(Error::Io(std::io::Error::other("x")).exit_code(), 1);
    }
}
