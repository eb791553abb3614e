//! Audit trail of a construction: the steps taken and every inequality that
//! was verified along the way.

use serde::{Deserialize, Serialize};

use crate::complex::Site;
use crate::error::{Error, Result};

/// One verified claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub stage: String,
    pub claim: String,
    pub region: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Site>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub stage: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub steps: Vec<Step>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn step(&mut self, stage: &str, detail: impl Into<String>) {
        self.steps.push(Step { stage: stage.to_string(), detail: detail.into() });
    }

    pub fn extend(&mut self, log: CheckLog) {
        self.checks.extend(log.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Collects checks for one stage; a failed requirement becomes a hypothesis
/// violation carrying its witness.
#[derive(Clone, Debug)]
pub struct CheckLog {
    stage: String,
    pub checks: Vec<Check>,
}

impl CheckLog {
    pub fn new(stage: impl Into<String>) -> Self {
        Self { stage: stage.into(), checks: Vec::new() }
    }

    pub fn stage(&self) -> &str {
        &self.stage
    }

    /// Records the outcome of a check; `witness` is the failing cell.
    pub fn record(&mut self, claim: impl Into<String>, region: impl Into<String>, witness: Option<Site>) -> Option<Site> {
        self.checks.push(Check {
            stage: self.stage.clone(),
            claim: claim.into(),
            region: region.into(),
            passed: witness.is_none(),
            witness: witness.clone(),
        });
        witness
    }

    /// Like [`CheckLog::record`] but fails on a witness.
    pub fn require(&mut self, claim: impl Into<String>, region: impl Into<String>, witness: Option<Site>) -> Result<()> {
        let claim = claim.into();
        let region = region.into();
        match self.record(claim.clone(), region.clone(), witness) {
            None => Ok(()),
            Some(w) => Err(Error::hypothesis(&self.stage, format!("{claim} on {region}"), w)),
        }
    }

    pub fn absorb(&mut self, other: CheckLog) {
        self.checks.extend(other.checks);
    }
}
