use std::process::ExitCode;

use clap::Parser;
use thermgraph_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|out| {
        emit(&out, cli.output.as_deref())?;
        Ok(out.failed_check)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("error: internal check failed: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
