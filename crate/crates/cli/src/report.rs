//! Check reports and the two emitters (text and JSON).
//!
//! Reports must be byte-identical across runs with the same flags and seed:
//! the check list is sorted by id before emission and wall-clock timings are
//! only serialized under `--timings` (the field stays present as null so
//! both formats always carry the same fields).

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Refuted,
    Inconclusive,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSet {
    pub p: u64,
    pub n: usize,
    pub trunc: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: ParamSet,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    pub runtime_ms: Option<u128>,
    pub diagnostics: Option<String>,
}

/// Outcome produced by one check body.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    pub diagnostics: Option<String>,
}

impl Outcome {
    pub fn verified(expected: Value, actual: Value) -> Self {
        Outcome {
            status: Status::Verified,
            expected,
            actual,
            diagnostics: None,
        }
    }

    pub fn refuted(expected: Value, actual: Value, diagnostics: String) -> Self {
        Outcome {
            status: Status::Refuted,
            expected,
            actual,
            diagnostics: Some(diagnostics),
        }
    }

    pub fn inconclusive(expected: Value, actual: Value, diagnostics: String) -> Self {
        Outcome {
            status: Status::Inconclusive,
            expected,
            actual,
            diagnostics: Some(diagnostics),
        }
    }

    pub fn error(expected: Value, diagnostics: String) -> Self {
        Outcome {
            status: Status::Error,
            expected,
            actual: Value::Null,
            diagnostics: Some(diagnostics),
        }
    }
}

/// A named deferred check.
pub struct Check {
    pub id: String,
    pub body: Box<dyn FnOnce() -> Outcome + Send>,
}

impl Check {
    pub fn new(id: &str, body: impl FnOnce() -> Outcome + Send + 'static) -> Self {
        Check {
            id: id.to_string(),
            body: Box::new(body),
        }
    }
}

/// Runs the checks in a worker pool and returns reports in canonical order
/// (sorted by check id, independent of completion order).
pub fn run_checks(checks: Vec<Check>, params: &ParamSet, timings: bool) -> Vec<CheckReport> {
    let mut reports: Vec<CheckReport> = checks
        .into_par_iter()
        .map(|check| {
            let start = Instant::now();
            let outcome = (check.body)();
            let runtime_ms = timings.then(|| start.elapsed().as_millis());
            CheckReport {
                check_id: check.id,
                params: params.clone(),
                status: outcome.status,
                expected: outcome.expected,
                actual: outcome.actual,
                runtime_ms,
                diagnostics: outcome.diagnostics,
            }
        })
        .collect();
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    reports
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    schema: u32,
    command: &'a str,
    checks: &'a [CheckReport],
}

pub fn emit_json(command: &str, reports: &[CheckReport]) -> String {
    let doc = ReportDoc {
        schema: 1,
        command,
        checks: reports,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

pub fn emit_text(command: &str, reports: &[CheckReport]) -> String {
    let mut out = String::new();
    out.push_str("schema: 1\n");
    out.push_str(&format!("command: {command}\n"));
    for r in reports {
        let runtime = match r.runtime_ms {
            Some(ms) => ms.to_string(),
            None => "null".to_string(),
        };
        let diagnostics = match &r.diagnostics {
            Some(d) => d.clone(),
            None => "null".to_string(),
        };
        out.push_str(&format!(
            "{} status={} p={} n={} trunc={} seed={} runtime_ms={} expected={} actual={} diagnostics={}\n",
            r.check_id,
            match r.status {
                Status::Verified => "verified",
                Status::Refuted => "refuted",
                Status::Inconclusive => "inconclusive",
                Status::Error => "error",
            },
            r.params.p,
            r.params.n,
            r.params.trunc,
            r.params.seed,
            runtime,
            serde_json::to_string(&r.expected).unwrap(),
            serde_json::to_string(&r.actual).unwrap(),
            diagnostics,
        ));
    }
    out
}

/// Exit code contract: 0 only when every check verified.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(|r| r.status == Status::Verified) {
        0
    } else {
        1
    }
}
