use std::io::Write;

use clap::Parser;
use purcat::commands::execute;
use purcat::Cli;

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let reports = execute(&cli);
    let mut out = std::io::stdout().lock();
    if cli.opts.json {
        if reports.len() == 1 && !matches!(cli.command, purcat::Command::Batch { .. }) {
            writeln!(out, "{}", reports[0].to_json())?;
        } else {
            writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
        }
    } else {
        for r in &reports {
            write!(out, "{}", r.to_text())?;
        }
    }
    out.flush()?;
    let code = reports.iter().map(|r| r.status).max().map_or(0, |s| s.exit_code());
    std::process::exit(code)
}
