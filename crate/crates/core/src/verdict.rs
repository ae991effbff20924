use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Named decimal values describing where a criterion broke, e.g.
/// `{u, s, h, lhs, rhs}` for a failed UD1 congruence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness(pub BTreeMap<String, String>);

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: String,
    pub pass: bool,
    /// Working depth the verdict is certified at, when depth matters.
    pub depth: Option<u32>,
    pub failed_condition: Option<String>,
    pub witness: Option<Witness>,
}

impl CriterionVerdict {
    pub fn pass(criterion: &str, depth: Option<u32>) -> Self {
        Self {
            criterion: criterion.to_string(),
            pass: true,
            depth,
            failed_condition: None,
            witness: None,
        }
    }

    pub fn fail(criterion: &str, depth: Option<u32>, condition: &str, witness: Witness) -> Self {
        Self {
            criterion: criterion.to_string(),
            pass: false,
            depth,
            failed_condition: Some(condition.to_string()),
            witness: Some(witness),
        }
    }

    pub fn summary(&self) -> String {
        match (&self.failed_condition, &self.witness) {
            (None, _) => format!("{}: pass", self.criterion),
            (Some(c), Some(w)) => format!("{}: fail at {c} ({w})", self.criterion),
            (Some(c), None) => format!("{}: fail at {c}", self.criterion),
        }
    }
}
