use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ncbundle::cli::{execute, Cli, EXIT_INVALID, EXIT_OK};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    let (output, code) = execute(&cli);
    if code == EXIT_INVALID {
        eprint!("{output}");
    } else {
        let _ = std::io::stdout().write_all(output.as_bytes());
    }
    ExitCode::from(code)
}
