use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, Result};

/// Key-value record of one CLI run: every flag with its resolved value and
/// every file it wrote.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunManifest {
    pub subcommand: String,
    /// Flag name (without dashes) and value, in a fixed order.
    pub parameters: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub artifact_paths: Vec<String>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "subcommand = {}", self.subcommand).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed = {seed}").unwrap();
        }
        for (k, v) in &self.parameters {
            writeln!(out, "param.{k} = {v}").unwrap();
        }
        for a in &self.artifact_paths {
            writeln!(out, "artifact = {a}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(" = ")
                .ok_or_else(|| invalid("manifest", format!("line {}: expected `key = value`", lineno + 1)))?;
            match key {
                "subcommand" => m.subcommand = value.to_string(),
                "seed" => {
                    m.seed = Some(
                        value
                            .parse()
                            .map_err(|_| invalid("manifest", format!("line {}: bad seed", lineno + 1)))?,
                    )
                }
                "artifact" => m.artifact_paths.push(value.to_string()),
                k => match k.strip_prefix("param.") {
                    Some(name) => m.parameters.push((name.to_string(), value.to_string())),
                    None => return Err(invalid("manifest", format!("line {}: unknown key `{k}`", lineno + 1))),
                },
            }
        }
        if m.subcommand.is_empty() {
            return Err(invalid("manifest", "missing `subcommand`"));
        }
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| invalid("manifest", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The argument vector that reproduces this run.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.subcommand.clone()];
        for (k, v) in &self.parameters {
            args.push(format!("--{k}"));
            args.push(v.clone());
        }
        args
    }
}
