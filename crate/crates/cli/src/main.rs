//! `subdivlab`: batch experiments over the subdivision embedder, its oracles
//! and the bound tables.
//!
//! Exit codes: 0 on success, 2 when the computation ran but the answer is a
//! structured "no" (threshold failure, unmet lemma precondition), 1 on usage
//! or I/O errors.

mod args;
mod commands;
mod experiment;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use report::{write_text, CliError, Output};

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Gen(a) => commands::gen(cli, a),
        Command::Regularize(a) => commands::regularize_cmd(cli, a),
        Command::Embed(a) => commands::embed_cmd(cli, a),
        Command::Pipeline(a) => commands::pipeline_cmd(cli, a),
        Command::VerifyLemma(a) => commands::verify_cmd(cli, a),
        Command::Extremal(a) => commands::extremal_cmd(cli, a),
        Command::BoundTable(a) => commands::bound_table_cmd(cli, a),
        Command::Experiment(a) => experiment::experiment_cmd(cli, a),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write_text(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| emit(&cli, &out.text).map(|()| out.failure));
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("subdivlab: {e}");
            ExitCode::from(1)
        }
    }
}
