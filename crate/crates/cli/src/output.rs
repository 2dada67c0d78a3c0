use std::fs;
use std::io::Write;
use std::path::Path;

use rarenet_core::rareness::truncate;
use rarenet_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::OutputArgs;

pub const TOOL: &str = "rarenet";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tool identity plus a SHA-256 over the canonical run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ToolStamp {
    pub name: &'static str,
    pub version: &'static str,
    pub config_hash: String,
}

impl ToolStamp {
    pub fn new(command: &str, config: &impl Serialize, extra: Value) -> Self {
        let canonical = json!({ "command": command, "config": config, "extra": extra });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        ToolStamp {
            name: TOOL,
            version: VERSION,
            config_hash: hex::encode(digest),
        }
    }

    pub fn comment(&self) -> String {
        format!("# {} {} config sha256:{}\n", self.name, self.version, self.config_hash)
    }
}

pub fn input_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn internal(e: impl std::fmt::Display) -> Error {
    Error::Internal(e.to_string())
}

pub fn write_to(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .map_err(|e| Error::Io(format!("stdout: {e}")))
        }
    }
}

/// Truncates every non-integer number in place.
pub fn truncate_numbers(v: &mut Value, decimals: u32) {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => {
            if let Some(x) = n.as_f64() {
                if let Some(t) = serde_json::Number::from_f64(truncate(x, decimals)) {
                    *n = t;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| truncate_numbers(x, decimals)),
        Value::Object(map) => map.values_mut().for_each(|x| truncate_numbers(x, decimals)),
        _ => {}
    }
}

/// Serializes `body`, applies display truncation and attaches the stamp
/// under `"tool"`.
pub fn json_document(body: &impl Serialize, stamp: &ToolStamp, out: &OutputArgs) -> Result<String> {
    let mut v = serde_json::to_value(body).map_err(internal)?;
    if !out.raw {
        truncate_numbers(&mut v, out.decimals);
    }
    stamp_json(v, stamp)
}

pub fn stamp_json(mut v: Value, stamp: &ToolStamp) -> Result<String> {
    if let Value::Object(map) = &mut v {
        map.insert("tool".into(), serde_json::to_value(stamp).map_err(internal)?);
    }
    Ok(serde_json::to_string_pretty(&v).map_err(internal)? + "\n")
}

pub fn number_formatter(out: &OutputArgs) -> impl Fn(f64) -> String + '_ {
    move |x| {
        if out.raw {
            format!("{x}")
        } else {
            format!("{:.*}", out.decimals as usize, truncate(x, out.decimals))
        }
    }
}
