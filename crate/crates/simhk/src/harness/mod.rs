//! Text formats, seeded instance generators, randomized consequence
//! suites, and the command-line interface.

pub mod cli;
pub mod format;
pub mod random;
pub mod suites;
