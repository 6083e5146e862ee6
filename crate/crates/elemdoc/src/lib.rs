//! Text formats, JSON output and the `elemdoc` command line.

pub mod format;
pub mod fixtures;
pub mod cli;
