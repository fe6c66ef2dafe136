//! Problem-file formats, certificates and the `gcover` command line on top of
//! `gcover-core`.

pub mod cli;
pub mod commands;
pub mod report;
pub mod schema;
