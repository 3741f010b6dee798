//! Command-line front end: instance documents, generators, solver dispatch,
//! solution verification and benchmark suites.

pub mod bench;
pub mod doc;
pub mod error;
pub mod gen;
pub mod run;
pub mod verify;

pub use doc::InstanceDoc;
pub use error::{CliError, CliResult};
