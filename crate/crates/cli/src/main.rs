use std::process::ExitCode;

use clap::Parser;
use kmono::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                if let (true, Some(c)) = (cli.json, report.first_failure()) {
                    eprintln!("check failed: {} ({})", c.name, c.witness.as_deref().unwrap_or("no witness"));
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
