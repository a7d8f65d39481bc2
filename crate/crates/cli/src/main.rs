//! `berkit` — Berezin-transform computations on finite kernel models.
//!
//! Exit codes: 0 success, 1 violations or failed reproduction, 2 usage or
//! parse errors, 3 shape/dimension errors, 4 unknown identifiers.

use clap::Parser;

fn main() {
    let cli = berkit_cli::app::Cli::parse();
    match berkit_cli::app::run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            std::process::exit(e.code);
        }
    }
}
