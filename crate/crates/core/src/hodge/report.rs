use serde::Serialize;

/// Outcome of one named identity or structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Human-readable descriptions of each failing instance.
    pub failures: Vec<String>,
}

/// Report of a validation pass; failures are recorded rather than raised.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub(crate) fn record(&mut self, name: &str, failures: Vec<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: failures.is_empty(),
            failures,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per failing check: `name: first failure (+k more)`.
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| {
                let first = c.failures.first().map(String::as_str).unwrap_or("failed");
                match c.failures.len() {
                    0 | 1 => format!("{}: {}", c.name, first),
                    k => format!("{}: {} (+{} more)", c.name, first, k - 1),
                }
            })
            .collect()
    }
}
