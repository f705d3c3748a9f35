use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The requested quadratic field is outside the supported class-number-one table.
    #[error("unsupported field Q(sqrt({d})): {reason}")]
    UnsupportedField { d: i64, reason: String },

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An enumeration table does not reach far enough for the requested sum.
    #[error("budget exhausted: {what}; extend enumeration to norm bound {required}")]
    Budget { what: String, required: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn budget(what: impl Into<String>, required: u64) -> Self {
        Error::Budget {
            what: what.into(),
            required,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            _ => 2,
        }
    }
}
