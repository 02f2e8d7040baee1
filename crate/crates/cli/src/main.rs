use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use guardwalk_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = std::io::stderr().write_all(e.message.as_bytes());
            if !e.message.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(e.code as u8)
        }
    }
}
