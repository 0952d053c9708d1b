//! `--config file.json` support: keys become flags appended after the ones
//! already on the command line, so explicit flags win.

use crate::error::CliError;
use serde_json::Value;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

/// Finds the `--config` path in raw arguments.
pub fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

fn flag_present(argv: &[OsString], flag: &str) -> bool {
    argv.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.strip_prefix(flag).is_some_and(|r| r.starts_with('='))
    })
}

/// Appends `--key value` for every config key whose flag is absent.
pub fn merge_config(mut argv: Vec<OsString>, path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!("config {} is not valid JSON: {e}", path.display()))
    })?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage("config must be a JSON object".into()));
    };
    let mut extra = Vec::new();
    for (key, v) in map {
        let flag = if key == "K" {
            "--K".to_string()
        } else {
            format!("--{}", key.replace('_', "-"))
        };
        if flag == "--config" || flag_present(&argv, &flag) {
            continue;
        }
        match v {
            Value::Bool(true) => extra.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => {
                extra.push(flag);
                extra.push(s);
            }
            other => {
                extra.push(flag);
                extra.push(other.to_string());
            }
        }
    }
    argv.extend(extra.into_iter().map(OsString::from));
    Ok(argv)
}
