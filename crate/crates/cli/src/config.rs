//! `key = value` config files merged into the command line.
//!
//! Each key names a long flag (`p-list = 4,8` or `p_list = 4,8`); blank lines
//! and lines starting with `#` are ignored. Flags given on the command line
//! win over the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::cli::Cli;

#[derive(Debug)]
pub struct ConfigError(pub String);

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(ConfigError(format!("line {}: invalid key `{}`", n + 1, key)));
        }
        if matches!(key.as_str(), "config" | "help" | "version") {
            return Err(ConfigError(format!("line {}: `{key}` cannot be set from a config file", n + 1)));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(ConfigError(format!("line {}: duplicate key `{key}`", n + 1)));
        }
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

fn given_on_command_line(argv: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    argv.iter().filter_map(|a| a.to_str()).any(|a| a == flag || a.starts_with(&prefix))
}

/// Appends config entries not already present in `argv` as long flags.
/// Keys that are not flags of `subcommand` are rejected.
pub fn merge(
    argv: &[OsString],
    subcommand: &str,
    entries: &BTreeMap<String, String>,
) -> Result<Vec<OsString>, ConfigError> {
    let root = Cli::command();
    let sub = root
        .find_subcommand(subcommand)
        .ok_or_else(|| ConfigError(format!("unknown subcommand {subcommand}")))?;
    let mut merged = argv.to_vec();
    for (key, value) in entries {
        let arg = sub
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| ConfigError(format!("unknown key `{key}` for {subcommand}")))?;
        if given_on_command_line(argv, key) {
            continue;
        }
        if arg.get_action().takes_values() {
            merged.push(format!("--{key}={value}").into());
        } else {
            match value.as_str() {
                "true" => merged.push(format!("--{key}").into()),
                "false" => {}
                _ => return Err(ConfigError(format!("`{key}` expects true or false"))),
            }
        }
    }
    Ok(merged)
}
