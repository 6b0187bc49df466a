use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use coefflab::exactalg::SUPPORTED_PRIMES;
use coefflab::treecoeff::RhoChoice;

pub const MAX_E: u32 = 3;
pub const MAX_DEPTH: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Lemma21,
    Lemma22,
    Corrpro,
    Presentation,
    Cogtri,
    Hecke,
    All,
}

impl Target {
    pub const EACH: [Target; 6] =
        [Target::Lemma21, Target::Lemma22, Target::Corrpro, Target::Presentation, Target::Cogtri, Target::Hecke];

    /// Whether the target draws random instances and so needs a seed.
    pub fn is_randomized(self, random: usize) -> bool {
        match self {
            Target::Lemma21 | Target::Hecke => random > 0,
            Target::Lemma22 => true,
            Target::All => true,
            _ => false,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("target serializes");
        write!(f, "{}", s.as_str().expect("string"))
    }
}

impl FromStr for Target {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| ConfigError::Invalid(format!("unknown target {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeckeCheck {
    Dim,
    Assoc,
    Vytastra,
    Flatness,
}

impl HeckeCheck {
    pub const ALL: [HeckeCheck; 4] = [HeckeCheck::Dim, HeckeCheck::Assoc, HeckeCheck::Vytastra, HeckeCheck::Flatness];
}

impl FromStr for HeckeCheck {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| ConfigError::Invalid(format!("unknown hecke check {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogSource {
    Builtin,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("--seed is required for randomized runs")]
    MissingSeed,
    #[error("empty module selection")]
    EmptySelection,
    #[error("catalog: {0}")]
    Catalog(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub target: Target,
    pub p: u32,
    pub e: u32,
    pub depth: u32,
    pub seed: Option<u64>,
    pub catalog: CatalogSource,
    /// Catalog entries to use; empty means all of them.
    pub modules: Vec<String>,
    /// Number of random instances per random family.
    pub random: usize,
    pub rho: RhoChoice,
    pub hecke_checks: Vec<HeckeCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(target: Target, p: u32) -> Self {
        RunConfig {
            target,
            p,
            e: 1,
            depth: 2,
            seed: None,
            catalog: CatalogSource::Builtin,
            modules: Vec::new(),
            random: 50,
            rho: RhoChoice::W0,
            hecke_checks: HeckeCheck::ALL.to_vec(),
            output: None,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !SUPPORTED_PRIMES.contains(&self.p) {
            return Err(ConfigError::Invalid(format!("p = {} not in {:?}", self.p, SUPPORTED_PRIMES)));
        }
        if self.e == 0 || self.e > MAX_E {
            return Err(ConfigError::Invalid(format!("e = {} not in 1..={MAX_E}", self.e)));
        }
        if self.depth == 0 || self.depth > MAX_DEPTH {
            return Err(ConfigError::Invalid(format!("depth = {} not in 1..={MAX_DEPTH}", self.depth)));
        }
        if self.jobs == 0 {
            return Err(ConfigError::Invalid("jobs must be positive".into()));
        }
        if self.seed.is_none() && self.target.is_randomized(self.random) {
            return Err(ConfigError::MissingSeed);
        }
        if self.target == Target::Hecke && self.p > 5 {
            return Err(ConfigError::Invalid("the Hecke algebra is built for p <= 5".into()));
        }
        if self.target == Target::Hecke && self.hecke_checks.is_empty() {
            return Err(ConfigError::Invalid("no hecke checks selected".into()));
        }
        Ok(())
    }

    /// Seed for the built-in catalog's random quotients.
    pub fn catalog_seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}
