//! Exhaustive comparison of the diophantine decision against direct
//! valuations.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diophdef::{decide, IntegralityDefinition};
use crate::error::{Error, Result};
use crate::perfectclosure::{decide_perf, PerfIntegralityDefinition};
use crate::places::{FieldSpec, GlobalField};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub field: FieldSpec,
    pub perfect: bool,
    pub place: String,
    pub helpers: Vec<String>,
    pub bound: u64,
    /// Largest level, for the perfect closure.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub levels: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub element: String,
    /// `ord >= 0`.
    pub expected: bool,
    /// `None` when the decision failed with `error`.
    pub decided: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Outcome of a sweep. The serialized form leaves out `wall_time` so that
/// equal configurations produce byte-identical reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub config: SweepConfig,
    pub tested: u64,
    pub agreed: u64,
    pub disagreed: u64,
    pub disagreements: Vec<Disagreement>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.disagreed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Artifact(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: SweepReport = serde_json::from_str(s).map_err(|e| Error::Artifact(e.to_string()))?;
        if r.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Artifact(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }

    fn collect(config: SweepConfig, results: Vec<Option<Disagreement>>, start: Instant) -> Self {
        let tested = results.len() as u64;
        let disagreements: Vec<Disagreement> = results.into_iter().flatten().collect();
        let disagreed = disagreements.len() as u64;
        SweepReport {
            schema_version: REPORT_SCHEMA_VERSION,
            config,
            tested,
            agreed: tested - disagreed,
            disagreed,
            disagreements,
            wall_time: start.elapsed(),
        }
    }
}

fn check(element: String, expected: bool, decided: Result<bool>) -> Option<Disagreement> {
    match decided {
        Ok(d) if d == expected => None,
        Ok(d) => Some(Disagreement { element, expected, decided: Some(d), error: None }),
        Err(e) => Some(Disagreement { element, expected, decided: None, error: Some(e.to_string()) }),
    }
}

/// `decide` against `ord_p x >= 0` on every element of height `<= bound`.
pub fn agreement_sweep<F: GlobalField>(def: &IntegralityDefinition<F>, bound: u64) -> SweepReport {
    let start = Instant::now();
    let k = &def.field;
    let elems = k.enumerate(bound);
    let results = elems
        .par_iter()
        .map(|x| {
            let expected = k.ord(&def.target, x).map(|o| o.is_none_or(|o| o >= 0));
            let expected = match expected {
                Ok(e) => e,
                Err(e) => return check(k.format_elem(x), false, Err(e)),
            };
            check(k.format_elem(x), expected, decide(def, x).map(|t| t.verdict))
        })
        .collect();
    let config = SweepConfig {
        field: k.spec(),
        perfect: false,
        place: def.target.to_string(),
        helpers: def.helpers.iter().map(|h| h.to_string()).collect(),
        bound,
        levels: None,
    };
    SweepReport::collect(config, results, start)
}

/// `decide_perf` against `ord_perf x >= 0` on every element of level
/// `<= levels` and height `<= bound`.
pub fn perf_agreement_sweep(def: &PerfIntegralityDefinition, levels: u32, bound: u64) -> SweepReport {
    let start = Instant::now();
    let k = &def.closure;
    let elems = k.enumerate(levels, bound);
    let results = elems
        .par_iter()
        .map(|x| {
            let expected = match k.is_integral(&def.target, x) {
                Ok(e) => e,
                Err(e) => return check(x.to_string(), false, Err(e)),
            };
            check(x.to_string(), expected, decide_perf(def, x).map(|t| t.verdict))
        })
        .collect();
    let config = SweepConfig {
        field: k.base().spec(),
        perfect: true,
        place: def.target.to_string(),
        helpers: def.helpers.iter().map(|h| h.to_string()).collect(),
        bound,
        levels: Some(levels),
    };
    SweepReport::collect(config, results, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophdef::{build_definition, DefinitionConfig};
    use crate::places::Rationals;

    #[test]
    fn small_sweep_is_reproducible() {
        let q = Rationals;
        let def = build_definition(&q, &crate::places::Place::Prime(5), &DefinitionConfig::default()).unwrap();
        let a = agreement_sweep(&def, 6);
        let b = agreement_sweep(&def, 6);
        assert!(a.passed(), "{:?}", a.disagreements);
        assert_eq!(a.tested, q.enumerate(6).len() as u64);
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(!a.to_json().unwrap().contains("wall"));
        let back = SweepReport::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(back.config, a.config);
    }
}
