mod args;
mod commands;
mod report;

use std::io::Write;

use clap::Parser;

use args::Cli;
use commands::Context;

fn main() {
    let cli = Cli::parse();
    let ctx = Context { seed: cli.seed, budget: cli.budget };
    let result = commands::run(&cli.command, &ctx);
    let text = if cli.json {
        serde_json::to_string_pretty(&result).expect("result serializes")
    } else {
        report::render_text(&result)
    };
    // a closed pipe downstream is not an error for us
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    std::process::exit(result.status.exit_code());
}
