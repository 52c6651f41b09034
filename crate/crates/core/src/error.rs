use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input fell outside the domain of the operation. `quantity` names
    /// the offending input so CLI users can see which value to fix.
    #[error("{quantity}: {reason}")]
    Domain {
        quantity: &'static str,
        reason: String,
    },

    /// A configuration document failed to parse or violated a constraint.
    #[error("config: {0}")]
    Config(String),

    /// A CSV document could not be read back.
    #[error("csv row {row}: {reason}")]
    Csv { row: usize, reason: String },

    #[error("{0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
