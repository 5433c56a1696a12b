use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class; maps onto process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    Parse,
    Precondition,
    Indeterminate,
    Internal,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Parse => 1,
            Category::Precondition => 2,
            Category::Indeterminate => 3,
            Category::Internal => 4,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("weights do not satisfy the summability condition: {0}")]
    Divergent(String),
    #[error("moment of order {order} does not exist (tail index {index})")]
    MissingMoment { order: usize, index: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cannot order exponents {0} and {1} under the stated assumptions")]
    AmbiguousOrder(String, String),
    #[error("value is not exactly representable: {0}")]
    Inexact(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("scale closure exceeds {0} elements")]
    ScaleOverflow(usize),
    #[error("higher order needed: {0}")]
    HigherOrderNeeded(String),
    #[error("Monte-Carlo confidence interval is degenerate at threshold {0}")]
    DegenerateInterval(f64),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Parse(_) => Category::Parse,
            Error::HigherOrderNeeded(_) => Category::Indeterminate,
            Error::Internal(_) => Category::Internal,
            _ => Category::Precondition,
        }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
