//! Higher-order tail expansions for weighted sums of heavy-tailed random variables.

pub mod apps;
pub mod cli;
pub mod engine;
pub mod error;
pub mod exponent;
pub mod matrix;
pub mod oracle;
pub mod laplace;
pub mod ring;
pub mod scale;
pub mod series;
pub mod sym;
pub mod tails;

pub use error::{Error, Result};
pub use exponent::{Assumptions, Exponent, Q};
pub use ring::{Ring, Scalar};
pub use sym::{RatFunc, Sym};
