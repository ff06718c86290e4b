//! Workspace parsing, command execution, and report emission for the dg
//! category kernel's command-line surface.

pub mod commands;
pub mod corpus;
pub mod report;
pub mod resolve;
pub mod schema;
