//! Thin binary shell: all behavior lives in the library's `cli` module.

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(flaglab::cli::run())
}
