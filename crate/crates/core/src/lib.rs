// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod lti;
pub mod polynomial;
pub mod sea;
pub mod sim;
pub mod synthesis;

pub use error::{Error, Result};
pub use lti::{RationalTf, StateSpace};
pub use polynomial::Polynomial;
