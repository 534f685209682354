//! Command-line interface: algebra files, state expressions and subcommands.

pub mod parse;

pub use parse::{parse_algebra, parse_lambda_poly, parse_relem, parse_state, render_algebra, AlgebraFile, InputError};
pub mod commands;

pub use commands::{run, Outcome, EXIT_FAIL, EXIT_PARSE, EXIT_PASS, EXIT_USAGE};
