//! Job manifests: one CLI invocation described as JSON.
//!
//! ```json
//! {"command": "build", "parameters": {"kind": "nerve", "group": "Z2", "level": 4},
//!  "inputs": [], "seed": 7, "outputs": ["z2.json"]}
//! ```
//!
//! `kind` and `property` become positional arguments, every other parameter a
//! `--flag value` pair (arrays repeat the flag, `true` is a bare switch).
//! Inputs and outputs are resolved against the manifest's directory.

use std::path::{Path, PathBuf};

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::{execute, input_err, Cli, Outcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobManifest {
    pub command: String,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Vec<PathBuf>,
}

const POSITIONAL: [&str; 5] = ["kind", "target", "subgroup", "file", "property"];

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

impl JobManifest {
    /// The equivalent command line (without the program name).
    pub fn to_args(&self, base: &Path) -> Result<Vec<String>, String> {
        if self.command == "run" {
            return Err("manifests cannot run other manifests".into());
        }
        let resolve = |p: &PathBuf| base.join(p).to_string_lossy().into_owned();
        let mut args = vec![self.command.clone()];
        for key in POSITIONAL {
            if key == "file" {
                if self.command == "check" {
                    let file = self.inputs.first().ok_or("check needs one input")?;
                    args.push(resolve(file));
                }
                continue;
            }
            if let Some(v) = self.parameters.get(key) {
                args.push(scalar(v).ok_or_else(|| format!("parameter {key} must be a string or number"))?);
            }
        }
        for (key, v) in &self.parameters {
            if POSITIONAL.contains(&key.as_str()) {
                continue;
            }
            let flag = format!("--{}", key.replace('_', "-"));
            match v {
                Value::Bool(true) => args.push(flag),
                Value::Bool(false) | Value::Null => {}
                Value::Array(items) => {
                    for item in items {
                        args.push(flag.clone());
                        args.push(scalar(item).ok_or_else(|| format!("parameter {key} has a non-scalar entry"))?);
                    }
                }
                other => {
                    args.push(flag);
                    args.push(scalar(other).ok_or_else(|| format!("parameter {key} must be a scalar or array"))?);
                }
            }
        }
        if self.command != "check" {
            for p in &self.inputs {
                args.push("--input".into());
                args.push(resolve(p));
            }
        }
        match &self.outputs[..] {
            [] => {}
            [p] => {
                args.push("--out".into());
                args.push(resolve(p));
            }
            _ => return Err("at most one output path per job".into()),
        }
        args.push("--seed".into());
        args.push(self.seed.to_string());
        Ok(args)
    }
}

pub fn run(path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let job: JobManifest = serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let args = job.to_args(base).map_err(input_err)?;
    let cli = Cli::try_parse_from(std::iter::once("segal".to_string()).chain(args)).map_err(|e| input_err(e.to_string()))?;
    execute(&cli)
}
