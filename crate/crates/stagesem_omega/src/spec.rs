//! JSON universe specifications.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::StageError;
use crate::stage::{StageCache, StageConfig};
use crate::universe::{build_universe, FullModel, DEFAULT_CAP};

fn default_rank() -> usize {
    2
}
fn default_stage() -> usize {
    StageConfig::default().stage_bound
}
fn default_budget() -> usize {
    StageConfig::default().step_budget
}

/// A universe and its stage bounds, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseSpec {
    /// Elements of each base type.
    pub base_domains: BTreeMap<String, Vec<String>>,
    /// Types with rank up to this bound are materialised eagerly.
    #[serde(default = "default_rank")]
    pub rank_bound: usize,
    /// Largest stage.
    #[serde(default = "default_stage")]
    pub stage_bound: usize,
    /// Per-query exploration budget.
    #[serde(default = "default_budget")]
    pub step_budget: usize,
    /// Extra witnesses for quantification over `ω`, as term text.
    #[serde(default)]
    pub extra_witnesses: Vec<String>,
}

impl UniverseSpec {
    /// Parse a JSON specification.
    pub fn from_json(src: &str) -> Result<UniverseSpec, StageError> {
        let s: UniverseSpec = serde_json::from_str(src).map_err(|e| StageError::Parse(e.to_string()))?;
        if s.stage_bound == 0 || s.step_budget == 0 {
            return Err(StageError::Config("stage_bound and step_budget must be positive".into()));
        }
        Ok(s)
    }

    /// The full model.
    pub fn model(&self) -> FullModel {
        FullModel { base_domains: self.base_domains.clone() }
    }

    /// Stage configuration with parsed witnesses.
    pub fn config(&self) -> Result<StageConfig, StageError> {
        let extra_witnesses = self
            .extra_witnesses
            .iter()
            .map(|w| lambda_core::parse(w).map_err(|e| StageError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StageConfig { stage_bound: self.stage_bound, step_budget: self.step_budget, extra_witnesses, ..StageConfig::default() })
    }

    /// Build the universe and an empty cache.
    pub fn build(&self) -> Result<StageCache, StageError> {
        let uni = build_universe(self.model(), self.rank_bound, DEFAULT_CAP)?;
        Ok(StageCache::new(uni, self.config()?))
    }
}
