//! Scenario configuration files: a JSON description of the factor list,
//! parameters, truncation levels, rank-oracle table, and seeds consumed by
//! the verification subcommands.

use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default)]
    pub p: Option<u64>,
    /// Coordinate range [lo, hi] of the truncated product.
    #[serde(default)]
    pub n_range: Option<(usize, usize)>,
    #[serde(default)]
    pub trunc: Option<TruncLevels>,
    #[serde(default)]
    pub seeds: Option<Seeds>,
    /// Rank-oracle table: pairs (alternating degree u, required rank r(u)).
    #[serde(default)]
    pub oracle: Vec<(u64, u64)>,
    #[serde(default)]
    pub factors: Vec<ScenarioFactor>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncLevels {
    pub closure: usize,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    pub default: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioFactor {
    Alt {
        points: usize,
    },
    Psl {
        p: u64,
        dim: usize,
        /// Largest alternating degree the factor is known to contain.
        #[serde(default)]
        l: Option<u64>,
    },
    Explicit {
        degree: usize,
        order: String,
        /// Largest alternating degree the factor is known to contain.
        #[serde(default)]
        l: Option<u64>,
    },
}

impl ScenarioFactor {
    /// The rank metadata used by block planning; alternating factors carry
    /// their degree, others must state it explicitly.
    pub fn l_value(&self) -> Option<u64> {
        match self {
            ScenarioFactor::Alt { points } => Some(*points as u64),
            ScenarioFactor::Psl { l, .. } => *l,
            ScenarioFactor::Explicit { l, .. } => *l,
        }
    }

    /// Point degree of the factor's natural action.
    pub fn degree(&self) -> usize {
        match self {
            ScenarioFactor::Alt { points } => *points,
            ScenarioFactor::Psl { p, dim, .. } => {
                framecheck_core::projective::point_count(*p, *dim) as usize
            }
            ScenarioFactor::Explicit { degree, .. } => *degree,
        }
    }

    /// Order of the factor group when derivable from the description.
    pub fn order(&self) -> Option<num_bigint::BigUint> {
        match self {
            ScenarioFactor::Alt { points } => {
                Some(framecheck_core::group_engine::factorial(*points as u64) / 2u32)
            }
            ScenarioFactor::Psl { p, dim, .. } => {
                Some(framecheck_core::projective::psl_image_order(*p, *dim))
            }
            ScenarioFactor::Explicit { order, .. } => order.parse().ok(),
        }
    }
}

pub fn load(path: &Path) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read scenario {}: {e}", path.display()))?;
    let scenario: Scenario =
        serde_json::from_str(&text).map_err(|e| format!("scenario parse error: {e}"))?;
    if scenario.schema != 1 {
        return Err(format!("unsupported scenario schema {}", scenario.schema));
    }
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_scenario() {
        let text = r#"{
            "schema": 1,
            "p": 3,
            "n_range": [3, 4],
            "trunc": { "closure": 12, "support": 25 },
            "seeds": { "default": 7 },
            "oracle": [[9841, 5], [265720, 9]],
            "factors": [
                { "kind": "alt", "points": 5 },
                { "kind": "psl", "p": 3, "dim": 9 },
                { "kind": "explicit", "degree": 9, "order": "216", "l": 4 }
            ]
        }"#;
        let s: Scenario = serde_json::from_str(text).unwrap();
        assert_eq!(s.p, Some(3));
        assert_eq!(s.oracle.len(), 2);
        assert_eq!(s.factors[0].l_value(), Some(5));
        assert_eq!(s.factors[1].l_value(), None);
        assert_eq!(s.factors[2].l_value(), Some(4));
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{ "schema": 1, "bogus": true }"#;
        assert!(serde_json::from_str::<Scenario>(text).is_err());
    }
}
