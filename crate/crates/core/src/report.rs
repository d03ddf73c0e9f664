//! Verification reports and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::geometry::Condition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub relation: String,
    pub pass: bool,
    pub approx: String,
}

impl CheckRecord {
    pub fn from_condition(c: &Condition, digits: u32) -> Self {
        CheckRecord {
            label: c.label.clone(),
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            relation: c.relation.symbol().to_string(),
            pass: c.holds(),
            approx: format!(
                "{} {} {}",
                c.lhs.approx_decimal(digits),
                c.relation.symbol(),
                c.rhs.approx_decimal(digits)
            ),
        }
    }

    /// A non-numeric check, e.g. "fact P1 is blue".
    pub fn structural(
        label: impl Into<String>,
        lhs: impl Into<String>,
        relation: &str,
        rhs: impl Into<String>,
        pass: bool,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        CheckRecord {
            label: label.into(),
            approx: format!("{lhs} {relation} {rhs}"),
            lhs,
            rhs,
            relation: relation.to_string(),
            pass,
        }
    }

    pub fn integer(label: impl Into<String>, lhs: i64, relation: &str, rhs: i64, pass: bool) -> Self {
        Self::structural(label, lhs.to_string(), relation, rhs.to_string(), pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub rule: String,
    pub status: StepStatus,
    pub checks: Vec<CheckRecord>,
}

impl StepReport {
    pub fn new(rule: impl Into<String>, checks: Vec<CheckRecord>) -> Self {
        let status = if checks.iter().all(|c| c.pass) { StepStatus::Pass } else { StepStatus::Fail };
        StepReport { rule: rule.into(), status, checks }
    }

    pub fn skipped(rule: impl Into<String>) -> Self {
        StepReport { rule: rule.into(), status: StepStatus::Skipped, checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.status == StepStatus::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Verified,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub verdict: Verdict,
    /// Certificate-level checks: dependencies, sections, goal.
    pub checks: Vec<CheckRecord>,
    pub steps: Vec<StepReport>,
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    /// Failed checks with the rule they belong to ("certificate" for
    /// certificate-level ones).
    pub fn failing_checks(&self) -> Vec<(&str, &CheckRecord)> {
        let top = self.checks.iter().map(|c| ("certificate", c));
        let steps = self.steps.iter().flat_map(|s| s.checks.iter().map(move |c| (s.rule.as_str(), c)));
        top.chain(steps).filter(|(_, c)| !c.pass).collect()
    }
}

/// Renders a report as stable JSON or as a plain-text table.
pub fn emit_report(report: &VerificationReport, json: bool) -> String {
    if json {
        return serde_json::to_string(report).expect("report serializes");
    }
    let mut out = String::new();
    let verdict = match report.verdict {
        Verdict::Verified => "Verified",
        Verdict::Rejected => "Rejected",
    };
    let _ = write!(out, "{:<12} {verdict}", report.id);
    if let Some(ms) = report.elapsed_ms {
        let _ = write!(out, " ({ms} ms)");
    }
    out.push('\n');
    let passed = report.checks.iter().filter(|c| c.pass).count();
    if !report.checks.is_empty() {
        let _ = writeln!(out, "      certificate checks: {passed}/{} passed", report.checks.len());
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        let _ = writeln!(out, "        failed: {}", c.label);
        let _ = writeln!(out, "          {} {} {}", c.lhs, c.relation, c.rhs);
    }
    for (i, step) in report.steps.iter().enumerate() {
        let status = match step.status {
            StepStatus::Pass => "ok",
            StepStatus::Fail => "FAIL",
            StepStatus::Skipped => "skip",
        };
        let _ = writeln!(out, "  {:>2}. {:<24} {status:<4} {} checks", i + 1, step.rule, step.checks.len());
        for c in step.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(out, "        failed: {}", c.label);
            let _ = writeln!(out, "          {} {} {}", c.lhs, c.relation, c.rhs);
            let _ = writeln!(out, "          ~ {}", c.approx);
        }
    }
    out
}
