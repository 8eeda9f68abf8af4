//! Files, command line and benchmark harness around `prtrp-core`.

pub mod bench;
pub mod cli;
pub mod format;
pub mod run;
