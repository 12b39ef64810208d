//! File formats, corpus ingestion and the command line around
//! [`qnlp_core`].

pub mod cli;
pub mod config;
pub mod corpus;
mod error;
pub mod files;
pub mod json;
pub mod svg;

pub use error::{Error, Result};
pub use qnlp_core as core;
