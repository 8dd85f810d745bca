use std::fmt;

/// One broken rule, located at a generator, monomial, crossing or face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: String,
    pub location: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.location, self.detail)
    }
}

/// Problems found by a validator. Validators never fail; they report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(
        &mut self,
        rule: &str,
        location: impl Into<String>,
        detail: impl Into<String>,
    ) {
        self.violations.push(Violation {
            rule: rule.to_string(),
            location: location.into(),
            detail: detail.into(),
        });
    }

    pub fn warning(&mut self, rule: &str, location: impl Into<String>, detail: impl Into<String>) {
        self.warnings.push(Violation {
            rule: rule.to_string(),
            location: location.into(),
            detail: detail.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}
