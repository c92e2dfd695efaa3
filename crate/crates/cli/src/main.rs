mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::Failure;
use kohn_spectrum::Error;
use report::Report;

const EXIT_USAGE: u8 = 1;
const EXIT_CHECK: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ResourceCap { .. } | Error::NonConvergence(_) | Error::NonFinite(_) => EXIT_RESOURCE,
        Error::InvalidArgument(_) | Error::DimensionTooSmall { .. } | Error::OutOfStrip { .. } | Error::Pole(_) => {
            EXIT_USAGE
        }
    }
}

fn render(report: &Report, format: Format, prefer_csv: bool) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Table if prefer_csv => report.to_csv(),
        Format::Table => report.to_table(),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    let outcome = match &cli.command {
        Command::Coeff(a) => commands::coeff(a),
        Command::Count(a) => commands::count(a),
        Command::Heat(a) => commands::heat(a),
        Command::Converge(a) => commands::converge(a),
        Command::Stanton(a) => commands::stanton(a),
    };
    let prefer_csv = commands::prefers_csv(&cli.command);

    let (report, code) = match outcome {
        Ok(report) => (report, 0),
        Err(Failure::Library(err)) => {
            eprintln!("error: {err}");
            return ExitCode::from(exit_code_for(&err));
        }
        Err(Failure::Check(report, msg)) => {
            eprintln!("check failed: {msg}");
            (report, EXIT_CHECK)
        }
    };
    if let Err(msg) = emit(&cli, &render(&report, cli.format, prefer_csv)) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}
