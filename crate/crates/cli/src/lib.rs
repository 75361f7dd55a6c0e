//! Command-line front end: surface syntax, sessions and the regression suite.

pub mod error;
pub mod eval;
pub mod paper;
pub mod parser;
pub mod printer;
pub mod session;

pub use error::{CliError, CliResult};
pub use session::{Options, Report, Session};
