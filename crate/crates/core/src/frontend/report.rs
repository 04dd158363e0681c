//! Structured results, schema `mcs-report/1`.
//!
//! Every report carries the fields `verdict`, `witness`, `violations`,
//! `repairs` and `equilibria`; fields that do not apply to a command are
//! `null` or empty.

use std::collections::BTreeMap;

use serde::Serialize;

use super::convert::format_ic;
use crate::constraints::{IntegrityConstraint, Mode, SatisfactionVerdict};
use crate::kernel::{BeliefState, Mcs};
use crate::repair::{RepairOutcome, UpdateAction};

pub const SCHEMA: &str = "mcs-report/1";

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BeliefSetJson {
    pub context: String,
    /// Closed sets answer every absent atom as false.
    pub closed: bool,
    pub beliefs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ViolationJson {
    pub constraint: usize,
    pub text: String,
    pub binding: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RepairJson {
    pub kind: &'static str,
    pub actions: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub mode: Option<Mode>,
    pub verdict: Option<&'static str>,
    pub witness: Option<Vec<BeliefSetJson>>,
    pub violations: Vec<ViolationJson>,
    pub repairs: Vec<RepairJson>,
    pub equilibria: Vec<Vec<BeliefSetJson>>,
    pub outcome: Option<&'static str>,
}

fn context_name(m: &Mcs, k: usize) -> String {
    m.contexts.get(k).map_or_else(|| k.to_string(), |c| c.name.clone())
}

pub fn state_json(m: &Mcs, s: &BeliefState) -> Vec<BeliefSetJson> {
    s.0.iter()
        .enumerate()
        .map(|(k, set)| BeliefSetJson {
            context: context_name(m, k),
            closed: set.is_closed(),
            beliefs: set.beliefs().iter().map(ToString::to_string).collect(),
        })
        .collect()
}

/// One line per context: `name: {beliefs}`.
pub fn format_state(m: &Mcs, s: &BeliefState) -> String {
    s.0.iter().enumerate().map(|(k, set)| format!("  {}: {set}", context_name(m, k))).collect::<Vec<_>>().join("\n")
}

/// `CTX:op(element)`.
pub fn format_action(m: &Mcs, a: &UpdateAction) -> String {
    format!("{}:{}({})", context_name(m, a.context.0), a.op, a.element)
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            mode: None,
            verdict: None,
            witness: None,
            violations: Vec::new(),
            repairs: Vec::new(),
            equilibria: Vec::new(),
            outcome: None,
        }
    }

    pub fn check(m: &Mcs, ics: &[IntegrityConstraint], mode: Mode, verdict: &SatisfactionVerdict) -> Self {
        let mut r = Report::new("check");
        r.mode = Some(mode);
        r.verdict = Some(if verdict.holds { "holds" } else { "fails" });
        r.witness = verdict.witness.as_ref().map(|s| state_json(m, s));
        r.violations = verdict
            .violation
            .iter()
            .map(|v| ViolationJson {
                constraint: v.constraint,
                text: format_ic(m, &ics[v.constraint]),
                binding: v.binding.iter().map(|(k, c)| (k.to_string(), c.to_string())).collect(),
            })
            .collect();
        r
    }

    pub fn equilibria(m: &Mcs, equilibria: &[BeliefState]) -> Self {
        let mut r = Report::new("equilibria");
        r.verdict = Some(if equilibria.is_empty() { "inconsistent" } else { "consistent" });
        r.equilibria = equilibria.iter().map(|s| state_json(m, s)).collect();
        r
    }

    pub fn repair(m: &Mcs, mode: Mode, outcome: &RepairOutcome) -> Self {
        let mut r = Report::new("repair");
        r.mode = Some(mode);
        let (verdict, kind) = match outcome {
            RepairOutcome::AlreadyConsistent => ("holds", "already_consistent"),
            RepairOutcome::Repairs(_) => ("fails", "repairs"),
            RepairOutcome::NoCandidates => ("fails", "no_candidates"),
            RepairOutcome::Exhausted { .. } => ("fails", "exhausted"),
        };
        r.verdict = Some(verdict);
        r.outcome = Some(kind);
        if let RepairOutcome::Repairs(list) = outcome {
            r.repairs = list
                .iter()
                .map(|rep| RepairJson { kind: "repair", actions: rep.actions.iter().map(|a| format_action(m, a)).collect() })
                .collect();
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
