//! Condition reports: one structured pass/fail/inconclusive verdict per
//! neighborhood-base condition, with the witnesses that verified or the
//! counterexample that refuted it.

use serde::{Deserialize, Serialize};

/// Instance witnesses kept per report.
pub const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionStatus {
    Pass,
    Fail,
    /// The candidate enumeration ran out on a truncated family; inconclusive,
    /// never conflated with failure.
    ExhaustedBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Every containment was decided exhaustively.
    Exact,
    /// At least one containment was verified on samples only.
    Sampled,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceWitness {
    /// Description of the outer universally-quantified instance.
    pub outer: serde_json::Value,
    /// The first member of the enumeration that verified, largest first.
    pub witness: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: serde_json::Value,
    pub violating: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub status: ConditionStatus,
    pub mode: CheckMode,
    /// Total outer instances that verified.
    #[serde(rename = "witness-count")]
    pub witness_count: u64,
    /// First few instance witnesses, for replay and triage.
    pub witnesses: Vec<InstanceWitness>,
    pub counterexample: Option<Counterexample>,
    #[serde(rename = "checks-performed")]
    pub checks_performed: u64,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.status == ConditionStatus::Pass
    }

    pub fn record_witness(&mut self, outer: serde_json::Value, witness: serde_json::Value) {
        self.witness_count += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(InstanceWitness { outer, witness });
        }
    }
}

pub fn all_conditions_passed(reports: &[ConditionReport]) -> bool {
    reports.iter().all(ConditionReport::passed)
}
