use std::fmt;

use serde::{Deserialize, Serialize};

use crate::basis::BasisId;

/// A concrete counterexample: which property broke, on which basis
/// elements, and what was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub property: String,
    pub items: Vec<BasisId>,
    pub detail: String,
}

impl Witness {
    pub fn new(property: impl Into<String>, items: Vec<BasisId>, detail: impl Into<String>) -> Self {
        Witness { property: property.into(), items, detail: detail.into() }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

/// Outcome of a check that may only be semi-decidable on infinite bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    UnknownWithinBound(usize),
}

impl Verdict {
    pub fn fails(property: impl Into<String>, items: Vec<BasisId>, detail: impl Into<String>) -> Self {
        Verdict::Fails(Witness::new(property, items, detail))
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    /// Three-valued conjunction: a failure wins, then an unknown.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (f @ Verdict::Fails(_), _) | (_, f @ Verdict::Fails(_)) => f,
            (u @ Verdict::UnknownWithinBound(_), _) | (_, u @ Verdict::UnknownWithinBound(_)) => u,
            _ => Verdict::Holds,
        }
    }

    /// Process exit code used by the command line.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails(_) => 1,
            Verdict::UnknownWithinBound(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::Fails(_) => "Fails",
            Verdict::UnknownWithinBound(_) => "UnknownWithinBound",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("Holds"),
            Verdict::Fails(w) => write!(f, "Fails({w})"),
            Verdict::UnknownWithinBound(d) => write!(f, "UnknownWithinBound({d})"),
        }
    }
}
