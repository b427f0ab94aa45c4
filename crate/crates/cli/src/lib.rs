//! Library half of the `netloc` command-line tool: instance I/O, the
//! seeded sampler, and the command implementations. The binary in
//! `main.rs` is a thin argument-parsing shell over these functions so
//! that tests can drive the exact same code paths in-process.

pub mod commands;
pub mod instance;
pub mod sampler;
pub mod table;

use netloc::Error;

/// Exit code conventions: 2 for parse/validation errors, 3 for
/// mechanism/topology mismatches, 4 for exhausted search budgets,
/// 1 for "found a deviation" / "no witness" outcomes.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::WrongTopology { .. } => 3,
        Error::BudgetExceeded { .. } => 4,
        _ => 2,
    }
}
