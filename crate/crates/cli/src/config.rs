//! `--config FILE`: each `key = value` line becomes `--key value`, placed
//! right after the subcommand so that anything typed on the command line
//! overrides it.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::CommandFactory;

use crate::args::Cli;
use crate::UsageError;

pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path)
        .with_context(|| format!("cannot read config file {}", path.display()))
        .map_err(UsageError::wrap)?;
    let pairs = parse(&text).map_err(UsageError::wrap)?;
    let Some(at) = subcommand_position(&argv) else {
        return Ok(argv);
    };
    let subcommand = argv[at].to_string_lossy().into_owned();
    let mut out = argv[..=at].to_vec();
    for (key, value) in pairs {
        // keys meant for other subcommands are skipped; unknown keys are
        // passed through so the parser reports them
        if applies_elsewhere(&subcommand, &key) {
            continue;
        }
        out.push(OsString::from(format!("--{key}")));
        out.push(OsString::from(value));
    }
    out.extend_from_slice(&argv[at + 1..]);
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<std::path::PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(|p| Path::new(p).to_path_buf());
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(Path::new(p).to_path_buf());
        }
    }
    None
}

fn longs(cmd: &clap::Command) -> Vec<String> {
    cmd.get_arguments().filter_map(|a| a.get_long().map(str::to_owned)).collect()
}

fn applies_elsewhere(subcommand: &str, key: &str) -> bool {
    let root = Cli::command();
    if longs(&root).iter().any(|l| l == key) {
        return false;
    }
    let mut here = false;
    let mut elsewhere = false;
    for sub in root.get_subcommands() {
        let has = longs(sub).iter().any(|l| l == key);
        if sub.get_name() == subcommand {
            here = has;
        } else {
            elsewhere |= has;
        }
    }
    !here && elsewhere
}

fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got {line:?}", i + 1);
        };
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            bail!("config line {}: invalid key {key:?}", i + 1);
        }
        pairs.push((key, value.trim().trim_matches('"').to_owned()));
    }
    Ok(pairs)
}

/// Index of the subcommand token, skipping global flags and their values.
fn subcommand_position(argv: &[OsString]) -> Option<usize> {
    let cmd = Cli::command();
    let valued: Vec<String> = cmd
        .get_arguments()
        .filter(|a| a.get_action().takes_values())
        .filter_map(|a| a.get_long().map(|l| format!("--{l}")))
        .collect();
    let names: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
    let mut i = 1;
    while i < argv.len() {
        let s = argv[i].to_string_lossy();
        if names.contains(&s.as_ref()) {
            return Some(i);
        }
        if valued.iter().any(|v| *v == s) {
            i += 1;
        }
        i += 1;
    }
    None
}
