use std::collections::HashSet;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

fn config_path(argv: &[String]) -> Option<(usize, usize, String)> {
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            return argv.get(i + 1).map(|p| (i, 2, p.clone()));
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some((i, 1, p.to_string()));
        }
    }
    None
}

fn mentions(argv: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let eq = format!("--{key}=");
    argv.iter().any(|a| *a == flag || a.starts_with(&eq))
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key=value", no + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(CliError::Usage(format!("config line {}: bad key {k:?}", no + 1)));
        }
        if !seen.insert(k.to_string()) {
            return Err(CliError::Usage(format!("config key {k} given twice")));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// Removes `--config <path>` from `argv` and appends the file's entries as
/// flags. A key that is also given on the command line is an error.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some((at, len, path)) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let mut args = argv;
    args.drain(at..at + len);
    for (k, v) in parse_config(&text)? {
        if k == "config" {
            return Err(CliError::Usage("config files cannot include other configs".into()));
        }
        if mentions(&args, &k) {
            return Err(CliError::Usage(format!("config key {k} conflicts with --{k}")));
        }
        match v.as_str() {
            "true" => args.push(format!("--{k}")),
            "false" => {}
            _ => {
                args.push(format!("--{k}"));
                args.push(v);
            }
        }
    }
    Ok(args)
}

/// First 16 hex digits of the SHA-256 of the effective arguments and seed.
pub fn config_hash(args: &[String], seed: u64) -> String {
    let mut h = Sha256::new();
    for a in args.iter().skip(1) {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    h.update(format!("seed={seed}").as_bytes());
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}
