//! `key=value` config files, applied as flags that the command line overrides.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

/// Global flags that take a value and may precede the subcommand.
const GLOBAL_VALUED: [&str; 5] = ["--config", "--seed", "--jobs", "--output", "-o"];

/// Parsed config entries, `seed` excluded (it has its own precedence).
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    pub entries: Vec<(String, String)>,
    pub seed: Option<String>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, String> {
    let mut cfg = ConfigFile::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let (k, v) = (k.trim().trim_start_matches('-'), v.trim());
        if k.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        if k == "seed" {
            cfg.seed = Some(v.to_string());
        } else {
            cfg.entries.push((k.to_string(), v.to_string()));
        }
    }
    Ok(cfg)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Reads the config file named by `--config`, if any.
pub fn load(args: &[OsString]) -> Result<ConfigFile, String> {
    match config_path(args) {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let path = Path::new(&p);
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_config(&text)
        }
    }
}

/// Rebuilds argv as `prog <subcommand> [suite] <config flags> <user flags>`
/// so a flag given by the user always comes after (and overrides) the same
/// flag from the config file.
pub fn inject(args: Vec<OsString>, cfg: &ConfigFile) -> Vec<OsString> {
    if cfg.entries.is_empty() || args.is_empty() {
        return args;
    }
    let mut pre = Vec::new();
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if !s.starts_with('-') {
            break;
        }
        pre.push(args[i].clone());
        if GLOBAL_VALUED.contains(&s.as_ref()) && i + 1 < args.len() {
            pre.push(args[i + 1].clone());
            i += 1;
        }
        i += 1;
    }
    if i >= args.len() {
        return args;
    }
    let mut out = vec![args[0].clone(), args[i].clone()];
    let mut rest = i + 1;
    if args[i] == "verify" && rest < args.len() && !args[rest].to_string_lossy().starts_with('-') {
        out.push(args[rest].clone());
        rest += 1;
    }
    for (k, v) in &cfg.entries {
        out.push(format!("--{k}").into());
        if v != "true" {
            out.push(v.into());
        }
    }
    out.extend(pre);
    out.extend(args[rest..].iter().cloned());
    out
}
