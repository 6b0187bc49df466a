use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The instance does not satisfy the hypotheses; not a failure.
    Rejected,
    /// Computed and recorded, but not asserted either way.
    Recorded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubClaim {
    pub name: String,
    pub verdict: Verdict,
    /// Raw outcome for recorded claims, e.g. whether a section exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub vector: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub module: String,
    pub group: String,
    pub p: u32,
    pub e: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instance: Instance,
    pub claims: Vec<SubClaim>,
    pub dims: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<String>,
    pub elapsed_ms: f64,
}

impl LemmaReport {
    pub fn new(lemma: &str, instance: Instance) -> Self {
        LemmaReport {
            lemma: lemma.to_string(),
            instance,
            claims: Vec::new(),
            dims: BTreeMap::new(),
            witnesses: Vec::new(),
            rejection: None,
            elapsed_ms: 0.0,
        }
    }

    pub fn claim(&mut self, name: &str, ok: bool) -> &mut Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self.claims.push(SubClaim { name: name.to_string(), verdict, value: None, detail: None });
        self
    }

    pub fn claim_with(&mut self, name: &str, ok: bool, detail: String) -> &mut Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self.claims.push(SubClaim { name: name.to_string(), verdict, value: None, detail: Some(detail) });
        self
    }

    pub fn record(&mut self, name: &str, value: bool, detail: Option<String>) -> &mut Self {
        self.claims.push(SubClaim { name: name.to_string(), verdict: Verdict::Recorded, value: Some(value), detail });
        self
    }

    pub fn reject(&mut self, reason: &str) -> &mut Self {
        self.rejection = Some(reason.to_string());
        self.claims.push(SubClaim {
            name: "hypotheses".into(),
            verdict: Verdict::Rejected,
            value: None,
            detail: Some(reason.to_string()),
        });
        self
    }

    pub fn dim(&mut self, key: &str, value: impl TryInto<u64>) -> &mut Self {
        self.dims.insert(key.to_string(), value.try_into().ok().expect("dimension fits in u64"));
        self
    }

    pub fn witness(&mut self, label: &str, vector: Vec<u32>) -> &mut Self {
        self.witnesses.push(Witness { label: label.to_string(), vector });
        self
    }

    pub fn get_dim(&self, key: &str) -> Option<u64> {
        self.dims.get(key).copied()
    }

    pub fn is_rejected(&self) -> bool {
        self.rejection.is_some()
    }

    /// No asserted sub-claim failed. Rejected instances count as passing.
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn claim_verdict(&self, name: &str) -> Option<&Verdict> {
        self.claims.iter().find(|c| c.name == name).map(|c| &c.verdict)
    }

    pub fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }
}
