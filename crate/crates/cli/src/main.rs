use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use weightlab::Status;

mod args;
mod commands;
mod input;
mod report;

use args::{Cli, Expect, Format};
use report::{emit_plot_data, render_json, Outcome};

fn exit_code(cli: &Cli, outcome: &Outcome) -> u8 {
    let any = |s: Status| outcome.verdicts.iter().any(|v| v.status == s);
    if cli.common.expect == Some(Expect::Holds) && any(Status::Fails) {
        2
    } else if cli.common.strict && any(Status::Inconclusive) {
        3
    } else {
        0
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            // A closed pipe (`| head`) is not a failure of the run.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => Ok(r?),
        },
    }
}

fn run(argv: Vec<OsString>) -> Result<u8> {
    let argv = input::expand_config(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return Ok(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }

    let outcome = commands::run(&cli.command)?;
    let name = cli.command.name();
    let out = cli.common.out.as_deref();
    let emit = &cli.common.emit;
    if emit.contains(&Format::Json) {
        write_or_print(out, &render_json(name, cli.common.seed, &outcome)?)?;
    }
    if emit.contains(&Format::Csv) {
        let csv = outcome.table.to_csv();
        match out {
            Some(p) if emit.contains(&Format::Json) => write_or_print(Some(&p.with_extension("csv")), &csv)?,
            _ => write_or_print(out, &csv)?,
        }
    }
    if let Some(dir) = &cli.common.plot_dir {
        emit_plot_data(dir, name, &outcome.curves)?;
    }
    Ok(exit_code(&cli, &outcome))
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
