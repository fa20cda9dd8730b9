//! Library side of the `subspace-bounds` command: the JSON report format,
//! the embedded reference tables and the subcommands themselves.

pub mod commands;
pub mod published;
pub mod report;

pub use commands::{CliError, CliResult, Format};
pub use report::BoundReport;
