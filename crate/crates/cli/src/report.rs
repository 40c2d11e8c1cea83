//! Verification reports and their JSON / text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{Bound, Suite};
use crate::sampling::SamplePoint;

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// A scenario fails when more than this fraction of points is invalid.
pub const MAX_INVALID_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub status: Status,
    pub bound: Bound,
    pub tolerance: f64,
    pub evaluated: usize,
    pub invalid: usize,
    pub max_residual: Option<f64>,
    pub mean_residual: Option<f64>,
    pub min_residual: Option<f64>,
    /// The point with the largest residual, or the smallest one for a
    /// lower-bound suite.
    pub worst_point: Option<SamplePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
}

impl SuiteReport {
    pub fn suite(&self) -> Option<Suite> {
        self.name.parse().ok()
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvalidSummary {
    pub points: usize,
    pub fraction: f64,
    pub limit: f64,
    pub exceeded: bool,
    pub by_kind: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub name: Option<String>,
    pub n: usize,
    pub c: f64,
    pub k: Option<f64>,
    pub a1: String,
    pub a3: String,
    pub lambda: Option<String>,
    pub mu: Option<String>,
    pub samples: usize,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub seed: u64,
    pub core_version: String,
    pub cli_version: String,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub scenario: ScenarioSummary,
    pub suites: Vec<SuiteReport>,
    pub invalid: InvalidSummary,
    pub notes: Vec<String>,
    pub passed: bool,
    pub environment: Environment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl VerificationReport {
    pub fn suite(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == suite.name())
    }

    /// 0 when everything passes, 1 when a suite fails, 2 when too many
    /// points fall outside the validity domain.
    pub fn exit_code(&self) -> i32 {
        if self.invalid.exceeded {
            2
        } else if self.passed {
            0
        } else {
            1
        }
    }

    /// A copy with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.environment.elapsed_ms = 0.0;
        r
    }

    pub fn emit(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s.into_bytes()
            }
            Format::Text => self.to_text().into_bytes(),
        }
    }

    fn to_text(&self) -> String {
        let sc = &self.scenario;
        let mut out = String::new();
        let k = sc.k.map_or("-".to_string(), |k| format!("{k}"));
        let _ = writeln!(
            out,
            "scenario {}  n={} c={} k={} samples={} seed={} t_max={}",
            sc.name.as_deref().unwrap_or("-"),
            sc.n,
            sc.c,
            k,
            sc.samples,
            self.environment.seed,
            sc.t_max
        );
        let _ = writeln!(
            out,
            "{:<30} {:<7} {:>5} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8}",
            "suite", "status", "bound", "tolerance", "max", "mean", "min", "points", "invalid"
        );
        let num = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
        for s in &self.suites {
            let status = match s.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let bound = match s.bound {
                Bound::Upper => "<",
                Bound::Lower => ">",
            };
            let _ = writeln!(
                out,
                "{:<30} {:<7} {:>5} {:>10.1e} {:>10} {:>10} {:>10} {:>8} {:>8}",
                s.name,
                status,
                bound,
                s.tolerance,
                num(s.max_residual),
                num(s.mean_residual),
                num(s.min_residual),
                s.evaluated,
                s.invalid
            );
        }
        let _ = writeln!(
            out,
            "invalid points: {} ({:.1}%, limit {:.0}%){}",
            self.invalid.points,
            100.0 * self.invalid.fraction,
            100.0 * self.invalid.limit,
            if self.invalid.by_kind.is_empty() {
                String::new()
            } else {
                let kinds: Vec<String> =
                    self.invalid.by_kind.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!(" [{}]", kinds.join(", "))
            }
        );
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let _ = writeln!(
            out,
            "result: {}  ({:.0} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.environment.elapsed_ms
        );
        out
    }
}
