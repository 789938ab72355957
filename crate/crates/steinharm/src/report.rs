use serde::Serialize;
use serde_json::{Map, Value};

/// One exact comparison. `pass` is `expected == got`.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl Serialize, got: impl Serialize) -> Self {
        let expected = serde_json::to_value(expected).expect("serializable");
        let got = serde_json::to_value(got).expect("serializable");
        let pass = expected == got;
        Check { name: name.into(), expected, got, pass }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, true, ok)
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Totals {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Output of one command. Field order is the serialization order.
#[derive(Clone, Debug, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub result: Value,
    pub checks: Vec<Check>,
    pub totals: Totals,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl CommandReport {
    pub fn new(command: &str, parameters: Map<String, Value>) -> Self {
        CommandReport {
            command: command.to_string(),
            parameters,
            result: Value::Null,
            checks: vec![],
            totals: Totals::default(),
            wall_time_ms: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.retotal();
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        self.retotal();
    }

    fn retotal(&mut self) {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        self.totals = Totals { checks: self.checks.len(), passed, failed: self.checks.len() - passed };
    }

    pub fn all_pass(&self) -> bool {
        self.totals.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Plain-text table of the checks.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  {:<4}  {:<24}  {}\n", "check", "pass", "expected", "got");
        for c in &self.checks {
            out.push_str(&format!(
                "{:<width$}  {:<4}  {:<24}  {}\n",
                c.name,
                if c.pass { "yes" } else { "NO" },
                c.expected.to_string(),
                c.got
            ));
        }
        out.push_str(&format!("{} checks, {} passed, {} failed\n", self.totals.checks, self.totals.passed, self.totals.failed));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_exact_equality() {
        assert!(Check::new("a", 3, 3).pass);
        assert!(!Check::new("a", 3, 4).pass);
        assert!(!Check::new("a", 1, 1.0).pass);
        let mut r = CommandReport::new("x", Map::new());
        r.push(Check::new("a", 1, 1));
        r.push(Check::new("b", 1, 2));
        assert_eq!(r.totals, Totals { checks: 2, passed: 1, failed: 1 });
        assert!(!r.all_pass());
    }

    #[test]
    fn wall_time_is_omitted_by_default() {
        let r = CommandReport::new("x", Map::new());
        assert!(!r.to_json().contains("wall_time"));
    }
}
