//! Parallel experiments, file formats and the command-line driver built on
//! [`heavytail_core`].
//!
//! Parallel batches are assembled from the same counter-addressed blocks as
//! the sequential core routines, so results do not depend on the number of
//! worker threads.

pub mod battery;
pub mod cli;
pub mod io;
pub mod parallel;
pub mod parse;

pub use parallel::Engine;
