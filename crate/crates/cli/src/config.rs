//! Fills flags missing from the command line from a JSON config file, then
//! from `LABS_*` environment variables, by appending them to argv.

use std::collections::HashMap;
use std::fs;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, CommandFactory};
use serde_json::Value;

use crate::args::Cli;

fn config_path(argv: &[String]) -> Result<Option<String>> {
    for (i, tok) in argv.iter().enumerate() {
        if let Some(v) = tok.strip_prefix("--config=") {
            return Ok(Some(v.to_string()));
        }
        if tok == "--config" {
            return match argv.get(i + 1) {
                Some(v) => Ok(Some(v.clone())),
                None => bail!("--config needs a file"),
            };
        }
    }
    Ok(None)
}

fn json_to_arg(v: &Value) -> Option<String> {
    match v {
        Value::Null => None,
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => Some(items.iter().filter_map(json_to_arg).collect::<Vec<_>>().join(",")),
        other => Some(other.to_string()),
    }
}

fn env_key(long: &str) -> String {
    format!("LABS_{}", long.to_ascii_uppercase().replace('-', "_"))
}

/// Returns argv with defaults from the config file and environment appended
/// for every flag of the chosen subcommand not given explicitly. Errors here
/// are usage errors.
pub fn resolve_argv(argv: Vec<String>, env: &HashMap<String, String>) -> Result<Vec<String>> {
    let config: serde_json::Map<String, Value> = match config_path(&argv)? {
        Some(path) => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
            match serde_json::from_str(&text).with_context(|| format!("parsing config {path}"))? {
                Value::Object(map) => map,
                _ => bail!("config {path} must be a JSON object"),
            }
        }
        None => Default::default(),
    };
    let cmd = Cli::command();
    let Some(sub_name) = argv.iter().skip(1).find(|t| !t.starts_with('-') && cmd.find_subcommand(t.as_str()).is_some())
    else {
        return Ok(argv);
    };
    let sub = cmd.find_subcommand(sub_name.as_str()).expect("checked above");

    let mut out = argv.clone();
    for arg in sub.get_arguments() {
        let Some(long) = arg.get_long() else { continue };
        if matches!(long, "help" | "version" | "config") {
            continue;
        }
        let flag = format!("--{long}");
        let given = argv.iter().any(|t| *t == flag || t.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        let from_config = config.get(long).or_else(|| config.get(&long.replace('-', "_")));
        let is_switch = matches!(arg.get_action(), ArgAction::SetTrue);
        if is_switch {
            let on = match from_config {
                Some(Value::Bool(b)) => Some(*b),
                Some(other) => bail!("config key {long} must be true or false, got {other}"),
                None => env.get(&env_key(long)).map(|v| matches!(v.to_ascii_lowercase().as_str(), "1" | "true" | "yes")),
            };
            if on == Some(true) {
                out.push(flag);
            }
            continue;
        }
        let value = match from_config {
            Some(v) => json_to_arg(v),
            None => env.get(&env_key(long)).cloned(),
        };
        if let Some(v) = value {
            out.push(format!("{flag}={v}"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn precedence_cli_then_config_then_env() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        fs::write(&cfg, r#"{"seed": 5, "p_comb": 0.7, "no-wall-clock": true, "method": ["mts", "qemts"]}"#).unwrap();
        let env: HashMap<String, String> =
            [("LABS_SEED".into(), "9".into()), ("LABS_K".into(), "40".into()), ("LABS_P_COMB".into(), "0.1".into())]
                .into();
        let base = format!("labs solve --n 7 --config {}", cfg.display());
        let out = resolve_argv(argv(&base), &env).unwrap();
        assert!(out.contains(&"--seed=5".to_string()));
        assert!(out.contains(&"--p-comb=0.7".to_string()));
        assert!(out.contains(&"--k=40".to_string()));
        assert!(out.contains(&"--no-wall-clock".to_string()));
        assert!(out.contains(&"--method=mts,qemts".to_string()));

        let out = resolve_argv(argv(&format!("{base} --seed 1")), &env).unwrap();
        assert!(!out.iter().any(|t| t.starts_with("--seed=")));
    }

    #[test]
    fn untouched_without_subcommand() {
        let env = HashMap::new();
        assert_eq!(resolve_argv(argv("labs --help"), &env).unwrap(), argv("labs --help"));
    }
}
