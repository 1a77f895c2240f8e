mod args;
mod commands;
mod output;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::Cli;
use commands::{dispatch, Context, Failure};

const EXIT_INTERNAL: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

/// Parses `text` as JSON, anchoring errors at `source:line:column`.
fn parse_json(text: &str, source: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let msg = full.split(" at line ").next().unwrap_or(&full);
        Failure::Validation(format!("{source}:{}:{}: malformed JSON: {msg}", e.line(), e.column()))
    })
}

fn read_input(cli: &Cli) -> Result<Value, Failure> {
    match &cli.global.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
            parse_json(&text, &path.display().to_string())
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Validation(format!("cannot read standard input: {e}")))?;
            parse_json(&text, "<stdin>")
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.global.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Internal(format!("cannot write standard output: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let mut input = || read_input(cli);
    let mut ctx = Context {
        global: &cli.global,
        input: &mut input,
    };
    let outcome = dispatch(&cli.command, &mut ctx)?;
    let text = output::render(&outcome.value, &outcome.table, cli.global.format).map_err(Failure::Internal)?;
    emit(cli, &text)?;
    Ok(outcome.converged)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("warning: computation did not converge; the reported bracket is not tight");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_errors_carry_line_and_column() {
        let err = parse_json("{\n  \"a\": 1,\n  oops\n}", "in.json").unwrap_err();
        match err {
            Failure::Validation(m) => assert!(m.starts_with("in.json:3:3: malformed JSON"), "{m}"),
            other => panic!("{other:?}"),
        }
    }
}
