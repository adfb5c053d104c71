use std::io::Write;

use clap::Parser;
use fbl::cli::{run_with_workers, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let outcome = run_with_workers(&config);
    let text = if config.json { outcome.json_text() + "\n" } else { outcome.human_text() };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    std::process::exit(outcome.status);
}
