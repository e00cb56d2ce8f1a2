//! `key=value` configuration files. Each key names a long flag; the file's
//! values are spliced in front of the command line so explicit flags win.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::CliError;

/// Keys whose relative values are resolved against the config file's
/// directory.
const PATH_KEYS: [&str; 5] = ["edges", "labels", "selection", "reduced", "out-dir"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!("config line {}: expected key=value", idx + 1)));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", idx + 1)));
        }
        entries.push(Entry {
            key,
            value: value.trim().to_string(),
            line: idx + 1,
        });
    }
    Ok(entries)
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn to_flag(cmd: &clap::Command, entry: &Entry, base: &Path) -> Result<Option<Vec<OsString>>, CliError> {
    let Some(arg) = cmd.get_arguments().find(|a| a.get_long() == Some(entry.key.as_str())) else {
        return Ok(None);
    };
    let flag = format!("--{}", entry.key);
    if !arg.get_action().takes_values() {
        return match entry.value.to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" | "" => Ok(Some(vec![flag.into()])),
            "false" | "no" | "0" => Ok(Some(vec![])),
            other => Err(CliError::Config(format!(
                "config line {}: {} expects true or false, got {other:?}",
                entry.line, entry.key
            ))),
        };
    }
    let mut value = PathBuf::from(&entry.value);
    if PATH_KEYS.contains(&entry.key.as_str()) && value.is_relative() {
        value = base.join(value);
    }
    Ok(Some(vec![flag.into(), value.into_os_string()]))
}

/// Returns `args` with the config file's settings inserted. Global keys go
/// right after the program name, subcommand keys right after the
/// subcommand, so flags given on the command line override both.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse(&text)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();

    let root = Cli::command();
    let sub_at = args
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| root.find_subcommand(a.to_string_lossy().as_ref()).is_some())
        .map(|(i, _)| i);
    let sub = sub_at.and_then(|i| root.find_subcommand(args[i].to_string_lossy().as_ref()));

    let mut global = Vec::new();
    let mut local = Vec::new();
    for entry in &entries {
        if entry.key == "config" {
            continue;
        }
        if let Some(flag) = to_flag(&root, entry, &base)? {
            global.extend(flag);
        } else if let Some(flag) = sub.map(|s| to_flag(s, entry, &base)).transpose()?.flatten() {
            local.extend(flag);
        } else {
            return Err(CliError::Config(format!(
                "config line {}: unknown key {:?}",
                entry.line, entry.key
            )));
        }
    }

    let mut out = Vec::with_capacity(args.len() + global.len() + local.len());
    out.push(args[0].clone());
    out.extend(global);
    match sub_at {
        Some(i) => {
            out.extend(args[1..=i].iter().cloned());
            out.extend(local);
            out.extend(args[i + 1..].iter().cloned());
        }
        None => out.extend(args[1..].iter().cloned()),
    }
    Ok(out)
}
