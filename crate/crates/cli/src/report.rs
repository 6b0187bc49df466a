use serde::{Deserialize, Serialize};

use coefflab::lemmaverify::{Instance, LemmaReport, Verdict};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    Pass,
    Fail,
}

/// A failing instance, enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub lemma: String,
    pub instance: Instance,
    pub claims: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub reports: Vec<LemmaReport>,
    pub aggregate: Aggregate,
    pub failures: Vec<Failure>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(config: RunConfig, reports: Vec<LemmaReport>, elapsed_ms: f64) -> Report {
        let mut failures = Vec::new();
        for r in &reports {
            let failed: Vec<String> =
                r.claims.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.name.clone()).collect();
            let unexplained = r.claims.iter().any(|c| c.verdict == Verdict::Rejected) && r.rejection.is_none();
            if !failed.is_empty() || unexplained {
                failures.push(Failure { lemma: r.lemma.clone(), instance: r.instance.clone(), claims: failed });
            }
        }
        let aggregate = if failures.is_empty() { Aggregate::Pass } else { Aggregate::Fail };
        Report {
            tool: "coefflab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            reports,
            aggregate,
            failures,
            elapsed_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.aggregate == Aggregate::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with every wall-clock field zeroed, for replay comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        r.elapsed_ms = 0.0;
        for lr in &mut r.reports {
            lr.elapsed_ms = 0.0;
        }
        r
    }

    pub fn count(&self, lemma: &str) -> usize {
        self.reports.iter().filter(|r| r.lemma == lemma).count()
    }

    pub fn rejected(&self) -> usize {
        self.reports.iter().filter(|r| r.is_rejected()).count()
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .reports
            .iter()
            .map(|r| {
                let status = if r.is_rejected() {
                    "rejected"
                } else if r.passed() {
                    "pass"
                } else {
                    "FAIL"
                };
                let mut line = format!("{:<12} {:<28} p={} e={}", r.lemma, r.instance.module, r.instance.p, r.instance.e);
                if let Some(d) = r.instance.depth {
                    line.push_str(&format!(" D={d}"));
                }
                line.push_str(&format!(" {status} ({:.0} ms)", r.elapsed_ms));
                line
            })
            .collect();
        out.push(format!(
            "{} reports, {} rejected, {} failed: {}",
            self.reports.len(),
            self.rejected(),
            self.failures.len(),
            if self.passed() { "pass" } else { "fail" }
        ));
        out
    }
}
