//! Flat JSON configuration. Each key names a flag (dashes or underscores);
//! its value becomes that flag's default, so explicit flags override the
//! file. An optional `"command"` key selects the subcommand when none is
//! given on the command line, e.g. `"command": "freeprob mp"`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{CommandFactory, FromArgMatches};
use serde_json::{Map, Value};

use crate::Cli;

pub enum ParseError {
    Clap(clap::Error),
    Config(String),
}

/// Parses `argv` after folding in the `--config` file, if any.
pub fn parse(mut argv: Vec<OsString>) -> Result<Cli, ParseError> {
    let mut cmd = Cli::command();
    if let Some(path) = config_path(&argv) {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| ParseError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| ParseError::Config(format!("config {} is not valid JSON: {e}", path.display())))?;
        let Value::Object(map) = doc else {
            return Err(ParseError::Config("config must be a flat JSON object".into()));
        };
        cmd = apply_config(cmd, &map, &mut argv)?;
    }
    let matches = cmd.try_get_matches_from(argv).map_err(ParseError::Clap)?;
    Cli::from_arg_matches(&matches).map_err(ParseError::Clap)
}

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

fn apply_config(mut cmd: clap::Command, map: &Map<String, Value>, argv: &mut Vec<OsString>) -> Result<clap::Command, ParseError> {
    for (key, value) in map {
        if key == "command" {
            let Value::String(words) = value else {
                return Err(ParseError::Config("\"command\" must be a string".into()));
            };
            let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
            let given = argv.iter().skip(1).any(|a| names.iter().any(|n| a.to_string_lossy() == *n));
            if !given {
                // Right after the program name, so flags on the command line
                // land in the subcommand.
                let at = argv.len().min(1);
                argv.splice(at..at, words.split_whitespace().map(OsString::from));
            }
            continue;
        }
        let id = key.replace('-', "_");
        if id == "config" {
            return Err(ParseError::Config("a config file cannot name another config".into()));
        }
        let Some(text) = render(value) else { continue };
        let mut hit = false;
        cmd = set_default(cmd, &id, Box::leak(text.into_boxed_str()), &mut hit);
        if !hit {
            return Err(ParseError::Config(format!("unknown config key {key:?}")));
        }
    }
    Ok(cmd)
}

fn render(value: &Value) -> Option<String> {
    match value {
        Value::Null => None,
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => Some(items.iter().filter_map(render).collect::<Vec<_>>().join(",")),
        Value::Object(_) => Some(value.to_string()),
    }
}

/// Sets the default of every argument with this id, in all subcommands.
fn set_default(mut cmd: clap::Command, id: &str, value: &'static str, hit: &mut bool) -> clap::Command {
    if cmd.get_arguments().any(|a| a.get_id() == id) {
        cmd = cmd.mut_arg(id, |a| a.required(false).default_value(value));
        *hit = true;
    }
    let subs: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    for name in subs {
        cmd = cmd.mut_subcommand(name, |s| set_default(s, id, value, hit));
    }
    cmd
}
