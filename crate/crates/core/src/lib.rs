//! Partition statistics, the successor map `ν`, staircase sequences, local
//! and global chains, and a verifier and searcher for chain families of
//! fixed deficit.

pub mod catalan;
pub mod chaindata;
pub mod chains;
pub mod cli;
pub mod error;
pub mod nu;
pub mod partition;
pub mod search;
pub mod staircase;

pub use error::{Error, Result};
pub use partition::{DyckVector, Partition};
pub use staircase::{Staircase, StepFunction};
