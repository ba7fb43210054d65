use clap::Parser;
use std::process::ExitCode;
use tqmedium_cli::{render, run, Failure, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Failure::Parse.exit_code() as u8 } else { 0 });
        }
    };
    match run(&cfg) {
        Ok(report) => {
            let text = render(&report);
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(Failure::Precondition.exit_code() as u8);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}
