use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;

/// Named constants attached to a verdict (certificate or witness).
pub type Constants = BTreeMap<String, f64>;

/// Builds a [`Constants`] map from `(name, value)` pairs.
pub fn constants(pairs: &[(&str, f64)]) -> Constants {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    /// Logical conjunction with `Fails` dominating `Inconclusive`.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
            (Status::Holds, Status::Holds) => Status::Holds,
            _ => Status::Inconclusive,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Three-valued outcome of a finite-horizon check.
///
/// The constructors enforce that `Holds` carries a certificate and `Fails`
/// carries a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Option<Constants>,
    pub witness: Option<Constants>,
    pub horizon: Option<GridSpec>,
    pub margin: Option<f64>,
    pub note: String,
}

impl Verdict {
    pub fn holds(certificate: Constants) -> Self {
        Self {
            status: Status::Holds,
            certificate: Some(certificate),
            witness: None,
            horizon: None,
            margin: None,
            note: String::new(),
        }
    }

    pub fn fails(witness: Constants) -> Self {
        Self {
            status: Status::Fails,
            certificate: None,
            witness: Some(witness),
            horizon: None,
            margin: None,
            note: String::new(),
        }
    }

    pub fn inconclusive(margin: f64) -> Self {
        Self {
            status: Status::Inconclusive,
            certificate: None,
            witness: None,
            horizon: None,
            margin: Some(margin),
            note: String::new(),
        }
    }

    pub fn with_horizon(mut self, grid: GridSpec) -> Self {
        self.horizon = Some(grid);
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_inconclusive(&self) -> bool {
        self.status == Status::Inconclusive
    }

    /// Certificate constant by name.
    pub fn cert(&self, key: &str) -> Option<f64> {
        self.certificate.as_ref().and_then(|c| c.get(key).copied())
    }

    /// Witness constant by name.
    pub fn wit(&self, key: &str) -> Option<f64> {
        self.witness.as_ref().and_then(|c| c.get(key).copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_table() {
        use Status::*;
        assert_eq!(Holds.and(Holds), Holds);
        assert_eq!(Holds.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(Fails), Fails);
    }

    #[test]
    fn constructors_attach_payload() {
        let v = Verdict::holds(constants(&[("C", 2.0)]));
        assert_eq!(v.cert("C"), Some(2.0));
        let v = Verdict::fails(constants(&[("t", 5.0)]));
        assert_eq!(v.wit("t"), Some(5.0));
        assert!(Verdict::inconclusive(0.5).margin.is_some());
    }
}
