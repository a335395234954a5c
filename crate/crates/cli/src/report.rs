//! Deterministic command reports.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &Path) -> std::io::Result<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let mut hex = String::with_capacity(64);
        for b in digest.iter() {
            write!(hex, "{b:02x}").unwrap();
        }
        let input = Input {
            path: path.display().to_string(),
            sha256: hex,
        };
        Ok((input, bytes))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Dimensions {
    pub degree: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<Input>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Dimensions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bases: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emitted: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub exit_status: u8,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            verdict: String::new(),
            dimensions: None,
            bases: None,
            residuals: Vec::new(),
            witness: None,
            artifact: None,
            emitted: None,
            notes: Vec::new(),
            exit_status: 0,
        }
    }

    pub fn fail(&mut self, verdict: impl Into<String>) {
        self.verdict = verdict.into();
        self.exit_status = 1;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: nlie {}", self.command.join(" ")).unwrap();
        for i in &self.inputs {
            writeln!(s, "input: {} sha256:{}", i.path, i.sha256).unwrap();
        }
        writeln!(s, "verdict: {}", self.verdict).unwrap();
        if let Some(d) = &self.dimensions {
            let r = d.degree;
            writeln!(s, "dim Z^{r} = {}", d.dim_z).unwrap();
            writeln!(s, "dim B^{r} = {}", d.dim_b).unwrap();
            writeln!(s, "dim H^{r} = {}", d.dim_h).unwrap();
        }
        if let Some(Value::Array(bases)) = &self.bases {
            for (i, b) in bases.iter().enumerate() {
                writeln!(s, "representative {}: {}", i + 1, compact(b)).unwrap();
            }
        }
        for r in &self.residuals {
            writeln!(s, "residual: {}", compact(r)).unwrap();
        }
        if let Some(w) = &self.witness {
            writeln!(s, "witness: {}", compact(w)).unwrap();
        }
        for n in &self.notes {
            writeln!(s, "note: {n}").unwrap();
        }
        match (&self.emitted, &self.artifact) {
            (Some(path), _) => writeln!(s, "artifact written to {path}").unwrap(),
            (None, Some(a)) => writeln!(s, "artifact:\n{}", pretty(a)).unwrap(),
            _ => {}
        }
        writeln!(s, "exit status: {}", self.exit_status).unwrap();
        s
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("value serializes")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}
