use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use deltader_cli::reports::exit;
use deltader_cli::{run, Cli};

fn main() -> anyhow::Result<ExitCode> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID_INPUT } else { exit::OK };
            e.print()?;
            return Ok(ExitCode::from(code as u8));
        }
    };
    let outcome = run(&cli);
    if outcome.error {
        eprint!("{}", outcome.text);
    } else if let Some(path) = &cli.out {
        std::fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display()))?;
    } else {
        std::io::stdout().write_all(outcome.text.as_bytes())?;
    }
    Ok(ExitCode::from(outcome.code as u8))
}
