//! Command-line front end: manifold files in, JSON reports out.

pub mod commands;
pub mod input;
pub mod report;

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const INPUT: u8 = 2;
}
