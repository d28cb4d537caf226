use std::fmt;

use crate::field::Scalar;

/// One failed identity on a tuple of basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Name of the identity, e.g. `leibniz` or `rep2`.
    pub rule: String,
    /// Basis indices (0-based) the identity was evaluated on.
    pub indices: Vec<usize>,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        let show = |v: &[Scalar]| {
            v.iter()
                .map(Scalar::to_plain_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{} at ({}): lhs=({}) rhs=({})",
            self.rule,
            idx.join(","),
            show(&self.lhs),
            show(&self.rhs)
        )
    }
}

/// Outcome of checking a family of identities on all basis tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records one evaluated identity, keeping it only when the sides differ.
    pub fn compare(&mut self, rule: &str, indices: &[usize], lhs: Vec<Scalar>, rhs: Vec<Scalar>) {
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(Violation {
                rule: rule.to_string(),
                indices: indices.to_vec(),
                lhs,
                rhs,
            });
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    /// Merges with every rule name prefixed, e.g. `g.leibniz`.
    pub fn merge_prefixed(&mut self, prefix: &str, other: ValidationReport) {
        self.checked += other.checked;
        self.violations
            .extend(other.violations.into_iter().map(|mut v| {
                v.rule = format!("{prefix}.{}", v.rule);
                v
            }));
    }

    /// Violations of one rule.
    pub fn violations_of<'a>(&'a self, rule: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.rule == rule)
    }

    /// Distinct rule names that failed, in first-failure order.
    pub fn failed_rules(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for v in &self.violations {
            if !out.contains(&v.rule) {
                out.push(v.rule.clone());
            }
        }
        out
    }
}
