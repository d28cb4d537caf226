//! Command reports in a human layout or a line-oriented machine layout:
//!
//! ```text
//! #lra-report v1
//! command=check-rbo
//! status=pass
//! checked=8
//! ```

use std::fmt::Write as _;

use crate::field::Scalar;
use crate::manifest::format_vector;
use crate::tensor::{Bilinear, LinearMap, MultiMap};

pub const MACHINE_HEADER: &str = "#lra-report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Pass,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        let value = value.to_string().replace('\n', " ");
        self.entries.push((key.into(), value));
    }

    /// Marks the report failed unless `ok`.
    pub fn require(&mut self, ok: bool) {
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                let _ = writeln!(out, "{MACHINE_HEADER}");
                let _ = writeln!(out, "command={}", self.command);
                let _ = writeln!(out, "status={}", self.status.as_str());
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k}={v}");
                }
            }
            Format::Text => {
                let _ = writeln!(
                    out,
                    "{}: {}",
                    self.command,
                    self.status.as_str().to_uppercase()
                );
                let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "  {k:width$}  {v}");
                }
            }
        }
        out
    }
}

/// `(a, b, …)`.
pub fn format_tuple(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_plain_string).collect();
    format!("({})", parts.join(","))
}

/// Rows separated by `;`.
pub fn format_matrix(m: &LinearMap) -> String {
    let rows: Vec<String> = (0..m.target_dim())
        .map(|r| {
            m.matrix()
                .row(r)
                .iter()
                .map(Scalar::to_plain_string)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Nonzero values as `eI eJ -> v` separated by `;`, or `0`.
pub fn format_bilinear(b: &Bilinear) -> String {
    let parts: Vec<String> = b
        .nonzero_values()
        .into_iter()
        .map(|(i, j, v)| format!("e{} e{} -> {}", i + 1, j + 1, format_vector(&v)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}

/// Nonzero values of a multilinear map on basis tuples, like [`format_bilinear`].
pub fn format_multimap(f: &MultiMap) -> String {
    let mut parts = Vec::new();
    for tuple in crate::tensor::tuples(f.source_dim(), f.arity()) {
        let v = f.value(&tuple);
        if v.iter().any(|c| !c.is_zero()) {
            let args: Vec<String> = tuple.iter().map(|i| format!("e{}", i + 1)).collect();
            parts.push(format!("{} -> {}", args.join(" "), format_vector(v)));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}
