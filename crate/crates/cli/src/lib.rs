//! Command-line front end: argument parsing, pipeline orchestration, file
//! formats, and the kernel cache.

pub mod cache;
pub mod cli;
pub mod export;
pub mod molecule;

/// Process exit codes used by the binary.
pub mod exit_codes {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VALIDATION_FAILURE: i32 = 2;
    pub const BUDGET_REFUSAL: i32 = 3;
}
