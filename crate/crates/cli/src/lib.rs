//! Batch front end for the workbench: the JSON input format, command dispatch and
//! reports.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{run, Cli, Command};
pub use format::{parse_input, serialize_input, CertificateDoc, FormatError, InputDoc, Workspace};
pub use report::{Report, Status};
