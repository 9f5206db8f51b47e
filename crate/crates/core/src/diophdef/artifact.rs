//! JSON artifact for an [`IntegralityDefinition`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{emit_formula, verify_pair, FormulaTree, IntegralityDefinition, PairDefinition};
use crate::error::{Error, Result};
use crate::places::{FieldSpec, GlobalField};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub place: String,
    pub helper: String,
    pub p: String,
    pub q: String,
    pub a: String,
    pub b: String,
    pub r: u32,
    pub coset_reps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionArtifact {
    pub schema_version: u32,
    pub field: FieldSpec,
    pub target_place: String,
    pub helper_places: Vec<String>,
    pub copies: Vec<PairRecord>,
    pub formula: FormulaTree,
}

fn record<F: GlobalField>(k: &F, d: &PairDefinition<F::Elem>) -> PairRecord {
    PairRecord {
        place: d.place.to_string(),
        helper: d.helper.to_string(),
        p: k.format_elem(&d.p),
        q: k.format_elem(&d.q),
        a: k.format_elem(&d.a),
        b: k.format_elem(&d.b),
        r: d.r,
        coset_reps: d.coset_reps.iter().map(|s| k.format_elem(s)).collect(),
    }
}

fn unrecord<F: GlobalField>(k: &F, r: &PairRecord) -> Result<PairDefinition<F::Elem>> {
    Ok(PairDefinition {
        place: k.parse_place(&r.place)?,
        helper: k.parse_place(&r.helper)?,
        p: k.parse_elem(&r.p)?,
        q: k.parse_elem(&r.q)?,
        a: k.parse_elem(&r.a)?,
        b: k.parse_elem(&r.b)?,
        r: r.r,
        coset_reps: r.coset_reps.iter().map(|s| k.parse_elem(s)).collect::<Result<_>>()?,
    })
}

impl DefinitionArtifact {
    pub fn from_definition<F: GlobalField>(def: &IntegralityDefinition<F>) -> Self {
        let k = &def.field;
        DefinitionArtifact {
            schema_version: SCHEMA_VERSION,
            field: k.spec(),
            target_place: def.target.to_string(),
            helper_places: def.helpers.iter().map(|h| h.to_string()).collect(),
            copies: def.copies.iter().map(|d| record(k, d)).collect(),
            formula: emit_formula(def),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Artifact(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let a: DefinitionArtifact = serde_json::from_str(s).map_err(|e| Error::Artifact(e.to_string()))?;
        if a.schema_version != SCHEMA_VERSION {
            return Err(Error::Artifact(format!("unsupported schema version {}", a.schema_version)));
        }
        Ok(a)
    }

    /// Rebuild the definition over `k` and re-verify every invariant,
    /// including that the stored formula is the one the data determines.
    pub fn load<F: GlobalField>(&self, k: &F) -> Result<IntegralityDefinition<F>> {
        if self.field != k.spec() {
            return Err(Error::Artifact(format!("artifact is over {:?}, not {:?}", self.field, k.spec())));
        }
        let [hq, hl]: [String; 2] = self
            .helper_places
            .clone()
            .try_into()
            .map_err(|_| Error::Artifact("expected two helper places".into()))?;
        let [c1, c2]: [PairRecord; 2] =
            self.copies.clone().try_into().map_err(|_| Error::Artifact("expected two copies".into()))?;
        let target = k.parse_place(&self.target_place)?;
        let helpers = [k.parse_place(&hq)?, k.parse_place(&hl)?];
        let copies = [unrecord(k, &c1)?, unrecord(k, &c2)?];
        for (d, h) in copies.iter().zip(&helpers) {
            if d.place != target || d.helper != *h {
                return Err(Error::Artifact("copy places do not match the header".into()));
            }
            verify_pair(k, d).map_err(|e| Error::Artifact(format!("verification failed: {e}")))?;
        }
        if helpers[0] == helpers[1] {
            return Err(Error::Artifact("helper places coincide".into()));
        }
        let [d1, d2] = copies;
        let def = IntegralityDefinition { field: k.clone(), target, helpers, copies: [Arc::new(d1), Arc::new(d2)] };
        if emit_formula(&def) != self.formula {
            return Err(Error::Artifact("stored formula does not match the definition data".into()));
        }
        Ok(def)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophdef::{build_definition, DefinitionConfig};
    use crate::places::{FunctionField, Place, Rationals};

    #[test]
    fn round_trip() {
        let k = FunctionField::new(3).unwrap();
        let def = build_definition(&k, &k.parse_place("finite:t").unwrap(), &DefinitionConfig::default()).unwrap();
        let art = DefinitionArtifact::from_definition(&def);
        let s = art.to_json().unwrap();
        let back = DefinitionArtifact::from_json(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
        let def2 = back.load(&k).unwrap();
        assert_eq!(def2.copies[1].coset_reps, def.copies[1].coset_reps);
        assert!(back.load(&FunctionField::new(5).unwrap()).is_err());

        let mut tampered = back.clone();
        tampered.copies[0].a = "1".into();
        assert!(tampered.load(&k).is_err());
        let mut tampered = back.clone();
        tampered.schema_version = 2;
        assert!(DefinitionArtifact::from_json(&tampered.to_json().unwrap()).is_err());
    }

    #[test]
    fn rationals_artifact() {
        let def = build_definition(&Rationals, &Place::Prime(5), &DefinitionConfig::default()).unwrap();
        let art = DefinitionArtifact::from_definition(&def);
        assert_eq!(art.target_place, "prime:5");
        art.load(&Rationals).unwrap();
    }
}
