//! `lacuna` command-line driver.
//!
//! Exit codes: 0 success, 2 invalid input or failed precondition (error JSON
//! on stderr), 64 unknown subcommand, 65 malformed config file or
//! environment.

mod cli;
mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use serde_json::json;

use cli::Cli;

const EXIT_INVALID: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_CONFIG: u8 = 65;

fn fail(code: u8, kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", json!({"error": kind, "message": message}));
    ExitCode::from(code)
}

fn clap_failure(err: clap::Error) -> ExitCode {
    match err.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = err.print();
            ExitCode::SUCCESS
        }
        ErrorKind::InvalidSubcommand
        | ErrorKind::MissingSubcommand
        | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = err.print();
            ExitCode::from(EXIT_USAGE)
        }
        _ => fail(EXIT_INVALID, "usage", err.to_string().lines().next().unwrap_or("invalid arguments")),
    }
}

const GLOBAL_VALUE_FLAGS: [&str; 4] = ["--config", "--seed", "--output", "--format"];

/// Subcommand name and `--config` path, found without a full parse so that
/// the config file can supply required flags.
fn prescan(argv: &[OsString]) -> (Option<String>, Option<OsString>) {
    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let mut sub = None;
    let mut config = None;
    let mut i = 1;
    while i < argv.len() {
        let tok = argv[i].to_string_lossy();
        if let Some(path) = tok.strip_prefix("--config=") {
            config = Some(OsString::from(path));
        } else if tok == "--config" {
            config = argv.get(i + 1).cloned();
            i += 1;
        } else if GLOBAL_VALUE_FLAGS.contains(&tok.as_ref()) && sub.is_none() {
            i += 1;
        } else if sub.is_none() && !tok.starts_with('-') {
            if names.iter().any(|n| *n == tok) {
                sub = Some(tok.to_string());
            } else {
                return (None, config);
            }
        }
        i += 1;
    }
    (sub, config)
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("LACUNA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("LACUNA_THREADS must be a positive integer, got `{raw}`"))?;
    if n == 1 {
        lacuna::par::set_exec(lacuna::par::Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    Ok(())
}

fn parse_args(argv: Vec<OsString>) -> Result<Cli, ExitCode> {
    let (sub, config_path) = prescan(&argv);
    let (Some(sub), Some(path)) = (sub, config_path) else {
        return Cli::try_parse_from(&argv).map_err(clap_failure);
    };
    let merged = config::load(Path::new(&path))
        .and_then(|entries| config::merge(&argv, &sub, &entries))
        .map_err(|e| fail(EXIT_CONFIG, "config", &e.0))?;
    match Cli::try_parse_from(&merged) {
        Ok(cli) => Ok(cli),
        Err(err) => match Cli::try_parse_from(&argv) {
            // the command line is wrong on its own
            Err(own) if own.kind() != ErrorKind::MissingRequiredArgument => Err(clap_failure(own)),
            _ => Err(fail(EXIT_CONFIG, "config", err.to_string().lines().next().unwrap_or("invalid config"))),
        },
    }
}

fn main() -> ExitCode {
    if let Err(msg) = configure_threads() {
        return fail(EXIT_CONFIG, "config", &msg);
    }
    let cli = match parse_args(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    let outcome = match commands::run(&cli.command, cli.seed) {
        Ok(o) => o,
        Err(e) => return fail(EXIT_INVALID, e.kind(), &e.to_string()),
    };
    let name = cli.command.name();
    let resolved = json!({"seed": cli.seed, "format": cli.format, "args": report::to_value(&cli.command)});
    let text = report::render(cli.format, name, resolved, &outcome);
    match cli.output.as_deref() {
        Some(p) if p == Path::new("-") => print!("{text}"),
        Some(p) => {
            if let Err(e) = report::write_atomic(p, &text) {
                return fail(EXIT_INVALID, "io", &format!("cannot write {}: {e}", p.display()));
            }
            println!("{}", outcome.headline);
        }
        None => println!("{}", outcome.headline),
    }
    ExitCode::SUCCESS
}
