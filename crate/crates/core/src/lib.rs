#![cfg_attr(not(test), no_std)]
//! Compiler and trainer for compositional sentence models.
//!
//! Sentences become pregroup string diagrams (from CCG derivations or simple
//! readers), diagrams are simplified by rewrite rules and compiled by an
//! ansatz into a parameterised quantum circuit or tensor network, which the
//! backends evaluate and the trainers optimise.
//!
//! The crate needs only `alloc`; file formats and the command line live in
//! the companion `qnlp` crate.

extern crate alloc;

pub mod ansatz;
pub mod backends;
pub mod ccg;
pub mod diagram;
mod error;
pub mod pregroup;
pub mod readers;
pub mod rewrite;
pub mod training;

pub use diagram::{Diagram, Generator, Layer};
pub use error::{Error, Result};
pub use pregroup::{AtomicType, PType, TypeRegistry, TypeSeq};
