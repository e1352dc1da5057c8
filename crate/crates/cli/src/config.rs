//! `--config` files: `key = value` lines, `#` comments, keys named after the
//! long flags (`gamma`, `max-iters`, `flevoland-shape`, …).
//!
//! The file's settings are spliced into the argument list right after the
//! subcommand, skipping any flag already given on the command line, so
//! explicit flags always win. A key that only another subcommand accepts is
//! ignored, which lets one file drive the whole pipeline.

use clap::Command;

use crate::text::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse_config(text: &str) -> Result<Vec<Entry>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| ParseError::new(line, "expected `key = value`"))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(ParseError::new(line, "empty key"));
        }
        if key == "config" {
            return Err(ParseError::new(line, "config files cannot include other config files"));
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        out.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}

/// Turns config entries into arguments for `subcommand` of `cmd`.
///
/// `given` lists the long flags already present on the command line.
pub fn config_args(cmd: &Command, subcommand: &str, entries: &[Entry], given: &[String]) -> Result<Vec<String>, ParseError> {
    let sub = cmd.find_subcommand(subcommand);
    let mut out = Vec::new();
    for e in entries {
        let arg = sub.and_then(|s| s.get_arguments().find(|a| a.get_long() == Some(e.key.as_str())));
        let Some(arg) = arg else {
            let elsewhere = cmd
                .get_subcommands()
                .flat_map(|s| s.get_arguments())
                .any(|a| a.get_long() == Some(e.key.as_str()));
            if elsewhere {
                continue;
            }
            return Err(ParseError::new(e.line, format!("unknown key `{}`", e.key)));
        };
        if given.iter().any(|g| g == &e.key) {
            continue;
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{}", e.key));
            out.push(e.value.clone());
        } else {
            match e.value.as_str() {
                "true" => out.push(format!("--{}", e.key)),
                "false" => {}
                v => return Err(ParseError::new(e.line, format!("`{}` expects true or false, got `{v}`", e.key))),
            }
        }
    }
    Ok(out)
}
