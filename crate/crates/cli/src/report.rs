use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// What every command prints. No timings, so reruns are byte-identical.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, input_digest: Option<String>, result: Value) -> Report {
        Report { command, input_digest, seed: None, algorithm: None, result }
    }

    pub fn with_algorithm(mut self, a: impl ToString) -> Report {
        self.algorithm = Some(a.to_string());
        self
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(d) = &self.input_digest {
            out += &format!("input: sha256:{d}\n");
        }
        if let Some(s) = self.seed {
            out += &format!("seed: {s}\n");
        }
        if let Some(a) = &self.algorithm {
            out += &format!("algorithm: {a}\n");
        }
        if let Value::Object(m) = &self.result {
            for (k, v) in m {
                write_field(&mut out, k, v);
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => items
            .iter()
            .map(|x| if x.is_array() { x.to_string() } else { scalar(x) })
            .collect::<Vec<_>>()
            .join(" "),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn write_field(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::String(s) if s.contains('\n') => {
            *out += &format!("{key}:\n");
            for line in s.lines() {
                *out += &format!("  {line}\n");
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            *out += &format!("{key}:\n");
            for x in items {
                *out += &format!("  {}\n", scalar(x));
            }
        }
        Value::Object(m) => {
            *out += &format!("{key}:\n");
            for (k, x) in m {
                *out += &format!("  {k}: {}\n", scalar(x));
            }
        }
        _ => *out += &format!("{key}: {}\n", scalar(v)),
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}
