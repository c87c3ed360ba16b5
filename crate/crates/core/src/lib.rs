pub mod analysis;
pub mod connection;
pub mod error;
pub mod expr;
pub mod linalg4;
pub mod manifold;
pub mod sampling;
pub mod suite;

pub use error::{Error, ParseError, Result};
