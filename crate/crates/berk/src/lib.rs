//! File formats, exporters and the command set of the `berk` tool.

pub mod acceptance;
pub mod cli;
pub mod export;
pub mod schema;
