use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use spinlrl::report::{CheckReport, Residual};
use spinlrl::Error;

pub const SCHEMA_VERSION: &str = "1.0";

pub const EXIT_PASS: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numeric(_) | Failure::Io(_) => EXIT_NUMERIC,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(s) | Failure::Numeric(s) | Failure::Io(s) => s,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence(_) | Error::SingularPoint => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

pub type CmdResult = Result<u8, Failure>;

/// `{schema_version, config, results, notes?}`.
pub fn envelope(config: &impl Serialize, results: Vec<Value>, notes: Vec<String>) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "results": results,
    });
    if !notes.is_empty() {
        v["notes"] = json!(notes);
    }
    v
}

/// One result entry per checked identity, prefixed with `scope`.
pub fn report_entries(scope: &str, rep: &CheckReport) -> Vec<Value> {
    rep.checked
        .iter()
        .map(|label| {
            let bad: Vec<_> = rep.violations_for(label).collect();
            let mut e = json!({
                "identity": format!("{scope}/{label}"),
                "status": if bad.is_empty() { "pass" } else { "fail" },
            });
            if let Some(v) = bad.first() {
                e["residual"] = match &v.residual {
                    Residual::Exact(nonzero) => json!({ "exact_nonzero": nonzero }),
                    Residual::Norm(x) => json!(x),
                };
                e["indices"] = json!(v.indices);
                if let Some(w) = &v.witness {
                    e["witness"] = json!(w);
                }
                if bad.len() > 1 {
                    e["violations"] = json!(bad.len());
                }
            }
            e
        })
        .collect()
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

pub fn emit_json(path: Option<&Path>, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    emit(path, &s)
}

/// 15 significant digits, '.' decimal, no locale.
pub fn sig15(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    format!("{x:.14e}")
}
