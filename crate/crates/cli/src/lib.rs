//! Library backing the `submod` binary: command implementations, config
//! merging, artifact emission and plotting. Kept as a library so the
//! experiment pipelines are callable from integration tests.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod report;
pub mod signal;
pub mod svg;
