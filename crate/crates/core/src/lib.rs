pub mod error;
pub mod series;

pub use error::{Error, Result};
pub use series::{LaurentSeries, Rational, EXACT};
pub mod linalg;
pub mod spectral;
pub mod poly;
pub mod ramification;
pub mod grassmann;
pub mod fixtures;
pub mod checker;
pub mod tau;
pub mod serial;
pub mod cli;
