use serde::{Deserialize, Serialize};

use crate::znf::int::Int;
use crate::znf::{AbGroup, Morphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    OutOfBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn check(property: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        Verdict {
            property: property.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: if ok { None } else { Some(witness()) },
        }
    }

    pub fn out_of_budget(property: impl Into<String>, why: impl Into<String>) -> Self {
        Verdict { property: property.into(), status: Status::OutOfBudget, witness: Some(why.into()) }
    }
}

/// A computed group: invariant factors (0 for a free summand) and order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupData {
    pub label: String,
    pub invariants: Vec<String>,
    pub order: String,
}

impl GroupData {
    pub fn of(label: impl Into<String>, g: &AbGroup) -> Self {
        GroupData {
            label: label.into(),
            invariants: g.invariants().iter().map(Int::to_string).collect(),
            order: g.order().map_or_else(|| "infinite".into(), |o| o.to_string()),
        }
    }
}

/// A homomorphism as the matrix of generator images in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapData {
    pub label: String,
    pub matrix: Vec<Vec<String>>,
}

impl MapData {
    pub fn of(label: impl Into<String>, f: &Morphism) -> Self {
        let m = f.canonical_matrix();
        MapData { label: label.into(), matrix: m.to_rows().iter().map(|r| r.iter().map(Int::to_string).collect()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationResult {
    pub index: usize,
    pub kind: String,
    pub subject: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupData>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapData>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    /// Milliseconds, only when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl OperationResult {
    /// Out-of-budget checks were not run and do not count as failures.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub seed: String,
    pub budget: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<OperationResult>,
}

impl Report {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("reports always serialize")
    }
}
