//! Command-line front end for `steinharm-core`: JSON reports, dumps and the
//! acceptance suite.

pub mod cli;
pub mod report;
pub mod tree_oracle;
pub mod verify;

pub use cli::{run, Run};
pub use report::{Check, CommandReport};
