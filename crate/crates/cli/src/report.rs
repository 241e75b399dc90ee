use serde::{Deserialize, Serialize};

use crate::Target;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A documented discrepancy between a stated form and the verified one.
    /// Reported, never counted as a failure.
    Finding,
}

/// One measured identity with its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub target: Target,
    pub name: String,
    /// The identity under test, written out.
    pub identity: String,
    pub status: Status,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl Check {
    /// Pass iff `value <= threshold` and `value` is finite.
    pub fn at_most(target: Target, name: impl Into<String>, identity: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            target,
            name: name.into(),
            identity: identity.into(),
            status: pass_if(value.is_finite() && value <= threshold),
            value: Some(value),
            threshold: Some(threshold),
            detail: String::new(),
        }
    }

    /// Pass iff `value >= threshold`.
    pub fn at_least(target: Target, name: impl Into<String>, identity: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            status: pass_if(value >= threshold),
            ..Check::at_most(target, name, identity, value, threshold)
        }
    }

    /// Exact identity: pass iff there are no mismatches.
    pub fn exact(target: Target, name: impl Into<String>, identity: impl Into<String>, mismatches: usize) -> Self {
        Check::at_most(target, name, identity, mismatches as f64, 0.0)
    }

    pub fn failed(target: Target, name: impl Into<String>, identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            target,
            name: name.into(),
            identity: identity.into(),
            status: Status::Fail,
            value: None,
            threshold: None,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// Downgrade a failure to a finding.
    pub fn finding_if_failed(mut self) -> Self {
        if self.status == Status::Fail {
            self.status = Status::Finding;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub finding: usize,
}

/// Result of one verification target. `aborted` is set when the target
/// could not finish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub target: Target,
    pub checks: Vec<Check>,
    pub aborted: Option<String>,
    pub singular: bool,
}

impl TargetReport {
    pub fn new(target: Target, checks: Vec<Check>) -> Self {
        TargetReport {
            target,
            checks,
            aborted: None,
            singular: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub targets: Vec<TargetReport>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl VerifyReport {
    /// Assemble in target order and derive the exit code: 3 if any target
    /// hit a singularity, otherwise 1 on any failure or abort, otherwise 0.
    pub fn assemble(mut targets: Vec<TargetReport>) -> Self {
        targets.sort_by_key(|t| t.target);
        let mut summary = Summary::default();
        for c in targets.iter().flat_map(|t| &t.checks) {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Finding => summary.finding += 1,
            }
        }
        let exit_code = if targets.iter().any(|t| t.singular) {
            crate::EXIT_SINGULAR
        } else if summary.fail > 0 || targets.iter().any(|t| t.aborted.is_some()) {
            crate::EXIT_CHECK_FAILED
        } else {
            crate::EXIT_OK
        };
        VerifyReport {
            targets,
            summary,
            exit_code,
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.targets.iter().flat_map(|t| &t.checks)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for t in &self.targets {
            for c in &t.checks {
                let status = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Finding => "FIND",
                };
                let measured = match (c.value, c.threshold) {
                    (Some(v), Some(th)) => format!("  value={v:e} threshold={th:e}"),
                    (Some(v), None) => format!("  value={v:e}"),
                    _ => String::new(),
                };
                out.push_str(&format!("{status} {}::{}  [{}]{measured}", t.target.name(), c.name, c.identity));
                if !c.detail.is_empty() {
                    out.push_str(&format!("  ({})", c.detail));
                }
                out.push('\n');
            }
            if let Some(reason) = &t.aborted {
                out.push_str(&format!("ABORT {}: {reason}\n", t.target.name()));
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} findings\n",
            self.summary.pass, self.summary.fail, self.summary.finding
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert!(Check::at_most(Target::Measure, "a", "x = 0", 1e-9, 1e-8).passed());
        assert!(!Check::at_most(Target::Measure, "a", "x = 0", f64::NAN, 1e-8).passed());
        assert!(Check::at_least(Target::Quadrature, "o", "order", 2.9, 1.8).passed());
        assert!(Check::exact(Target::Theorem, "e", "E", 0).passed());
        let c = Check::exact(Target::Theorem, "e", "E", 3).finding_if_failed();
        assert_eq!(c.status, Status::Finding);
    }

    #[test]
    fn exit_codes_and_ordering() {
        let pass = TargetReport::new(Target::Theorem, vec![Check::exact(Target::Theorem, "a", "a", 0)]);
        let finding = TargetReport::new(
            Target::Chart,
            vec![Check::exact(Target::Chart, "b", "b", 1).finding_if_failed()],
        );
        let r = VerifyReport::assemble(vec![pass.clone(), finding]);
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.targets[0].target, Target::Chart);
        assert_eq!(r.summary, Summary { pass: 1, fail: 0, finding: 1 });
        let fail = TargetReport::new(Target::Measure, vec![Check::exact(Target::Measure, "c", "c", 1)]);
        assert_eq!(VerifyReport::assemble(vec![pass.clone(), fail]).exit_code, 1);
        let mut singular = TargetReport::new(Target::Integrals, vec![]);
        singular.singular = true;
        singular.aborted = Some("singular".into());
        assert_eq!(VerifyReport::assemble(vec![pass, singular]).exit_code, 3);
    }
}
