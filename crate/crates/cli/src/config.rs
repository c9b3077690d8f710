//! JSON run configuration. Every rational is written as a string `"p/q"` so
//! that exactness survives parsing.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use qracah_core::scalar::{parse_rational, Factor, ParamSet};

pub const DEFAULT_MAX_DIM: usize = 18;
pub const DEFAULT_GAUGES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Relations,
    Equitable,
    Loperator,
    Tdpair,
    Psi,
    Proof,
}

impl Suite {
    /// Dependency order.
    pub const ALL: [Suite; 6] = [
        Suite::Relations,
        Suite::Equitable,
        Suite::Loperator,
        Suite::Tdpair,
        Suite::Psi,
        Suite::Proof,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Equitable => "equitable",
            Suite::Loperator => "loperator",
            Suite::Tdpair => "tdpair",
            Suite::Psi => "psi",
            Suite::Proof => "proof",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Expands a list of suite names; `"all"` selects every suite.
pub fn parse_suites<S: AsRef<str>>(names: &[S]) -> Result<BTreeSet<Suite>, Vec<String>> {
    let mut out = BTreeSet::new();
    let mut errs = Vec::new();
    for n in names {
        let n = n.as_ref().trim();
        if n == "all" {
            out.extend(Suite::ALL);
        } else {
            match n.parse() {
                Ok(s) => {
                    out.insert(s);
                }
                Err(e) => errs.push(e),
            }
        }
    }
    if out.is_empty() && errs.is_empty() {
        errs.push("suites must not be empty".to_string());
    }
    if errs.is_empty() {
        Ok(out)
    } else {
        Err(errs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawFactor {
    pub d: usize,
    pub mu: String,
    #[serde(default = "one")]
    pub xi: String,
}

fn one() -> String {
    "1".to_string()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub count: usize,
    pub seed: u64,
}

/// The configuration document as written on disk.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub q: String,
    pub a: String,
    pub b: String,
    pub factors: Vec<RawFactor>,
    #[serde(default = "all_suites")]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    /// Extra random xi gauges for the psi suite.
    #[serde(default = "default_gauges")]
    pub gauges: usize,
    #[serde(default)]
    pub gauge_seed: u64,
}

fn all_suites() -> Vec<String> {
    vec!["all".to_string()]
}

fn default_max_dim() -> usize {
    DEFAULT_MAX_DIM
}

fn default_gauges() -> usize {
    DEFAULT_GAUGES
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: ParamSet,
    pub suites: BTreeSet<Suite>,
    pub sweep: Option<SweepSpec>,
    pub output_path: Option<String>,
    pub max_dim: usize,
    pub gauges: usize,
    pub gauge_seed: u64,
    pub raw: RawConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

impl ConfigError {
    pub fn messages(&self) -> Vec<String> {
        match self {
            ConfigError::Invalid(v) => v.clone(),
            e => vec![e.to_string()],
        }
    }
}

impl RawConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Parses rationals, checks every invariant and collects all violations.
    pub fn validate(self) -> Result<RunConfig, ConfigError> {
        let mut errs = Vec::new();
        let mut rational = |field: &str, s: &str| match parse_rational(s) {
            Ok(x) => Some(x),
            Err(e) => {
                errs.push(format!("{field}: {e}"));
                None
            }
        };
        let q = rational("q", &self.q);
        let a = rational("a", &self.a);
        let b = rational("b", &self.b);
        let factors: Vec<Option<Factor>> = self
            .factors
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let mu = rational(&format!("factors[{j}].mu"), &f.mu);
                let xi = rational(&format!("factors[{j}].xi"), &f.xi);
                Some(Factor::new(f.d, mu?, xi?))
            })
            .collect();
        let suites = match parse_suites(&self.suites) {
            Ok(s) => s,
            Err(e) => {
                errs.extend(e);
                BTreeSet::new()
            }
        };
        if self.max_dim < 2 {
            errs.push("max_dim must be at least 2".into());
        }
        if let Some(sw) = &self.sweep {
            if sw.count == 0 {
                errs.push("sweep.count must be at least 1".into());
            }
        }
        let params = match (q, a, b, factors.into_iter().collect::<Option<Vec<_>>>()) {
            (Some(q), Some(a), Some(b), Some(factors)) => {
                match (ParamSet { q, a, b, factors }).validate() {
                    Ok(p) => Some(p),
                    Err(v) => {
                        errs.extend(v.iter().map(ToString::to_string));
                        None
                    }
                }
            }
            _ => None,
        };
        if let Some(p) = &params {
            let dim = p.dimension();
            if dim > self.max_dim {
                errs.push(format!("module dimension {dim} exceeds max_dim {}", self.max_dim));
            }
        }
        match params {
            Some(params) if errs.is_empty() => Ok(RunConfig {
                params,
                suites,
                sweep: self.sweep,
                output_path: self.output.clone(),
                max_dim: self.max_dim,
                gauges: self.gauges,
                gauge_seed: self.gauge_seed,
                raw: self,
            }),
            _ => Err(ConfigError::Invalid(errs)),
        }
    }
}

pub fn load(path: &std::path::Path) -> Result<RawConfig, ConfigError> {
    RawConfig::from_json(&std::fs::read_to_string(path)?)
}

pub const CONFIG_SCHEMA: &str = r##"{
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "qracah run configuration",
  "type": "object",
  "additionalProperties": false,
  "required": ["q", "a", "b", "factors"],
  "definitions": {
    "rational": {
      "type": "string",
      "pattern": "^\\s*-?[0-9]+(\\s*/\\s*-?[0-9]+)?\\s*$",
      "description": "exact rational written as \"p/q\" or \"p\""
    }
  },
  "properties": {
    "q": { "$ref": "#/definitions/rational", "description": "deformation parameter, not 0, 1 or -1" },
    "a": { "$ref": "#/definitions/rational", "description": "nonzero eigenvalue parameter of A" },
    "b": { "$ref": "#/definitions/rational", "description": "nonzero eigenvalue parameter of A*" },
    "factors": {
      "type": "array",
      "minItems": 1,
      "description": "evaluation modules V(d, mu), tensored left to right",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["d", "mu"],
        "properties": {
          "d": { "type": "integer", "minimum": 1 },
          "mu": { "$ref": "#/definitions/rational" },
          "xi": { "$ref": "#/definitions/rational", "default": "1" }
        }
      }
    },
    "suites": {
      "type": "array",
      "minItems": 1,
      "items": { "enum": ["relations", "equitable", "loperator", "tdpair", "psi", "proof", "all"] },
      "default": ["all"]
    },
    "sweep": {
      "type": "object",
      "additionalProperties": false,
      "required": ["count", "seed"],
      "properties": {
        "count": { "type": "integer", "minimum": 1 },
        "seed": { "type": "integer", "minimum": 0 }
      }
    },
    "output": { "type": "string" },
    "max_dim": { "type": "integer", "minimum": 2, "default": 18 },
    "gauges": { "type": "integer", "minimum": 0, "default": 3 },
    "gauge_seed": { "type": "integer", "minimum": 0, "default": 0 }
  }
}
"##;

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> &'static str {
        r#"{"q":"2","a":"3","b":"7","factors":[{"d":1,"mu":"5"}]}"#
    }

    #[test]
    fn defaults() {
        let c = RawConfig::from_json(base()).unwrap().validate().unwrap();
        assert_eq!(c.suites.len(), 6);
        assert_eq!(c.max_dim, 18);
        assert_eq!(c.gauges, 3);
        assert_eq!(c.params.factors[0].xi, qracah_core::scalar::rat(1));
    }

    #[test]
    fn q_one_is_rejected() {
        let raw = RawConfig::from_json(&base().replace(r#""q":"2""#, r#""q":"1""#)).unwrap();
        let msgs = raw.validate().unwrap_err().messages();
        assert_eq!(msgs, vec!["q: q is a root of unity".to_string()]);
    }

    #[test]
    fn every_violation_is_listed() {
        let raw = RawConfig::from_json(
            r#"{"q":"x","a":"0","b":"7","factors":[{"d":1,"mu":"0"}],"suites":["bogus"],"max_dim":1,"sweep":{"count":0,"seed":1}}"#,
        )
        .unwrap();
        let msgs = raw.validate().unwrap_err().messages();
        assert!(msgs.iter().any(|m| m.starts_with("q:")), "{msgs:?}");
        assert!(msgs.iter().any(|m| m.contains("unknown suite")));
        assert!(msgs.iter().any(|m| m.contains("max_dim")));
        assert!(msgs.iter().any(|m| m.contains("sweep.count")));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RawConfig::from_json(r#"{"q":"2","a":"3","b":"7","factors":[],"extra":1}"#).is_err());
    }

    #[test]
    fn dimension_cap() {
        let raw = RawConfig::from_json(
            r#"{"q":"2","a":"3","b":"7","factors":[{"d":4,"mu":"5"},{"d":3,"mu":"7"}]}"#,
        )
        .unwrap();
        let msgs = raw.validate().unwrap_err().messages();
        assert!(msgs[0].contains("exceeds max_dim"));
    }

    #[test]
    fn schema_is_valid_json() {
        let v: serde_json::Value = serde_json::from_str(CONFIG_SCHEMA).unwrap();
        assert_eq!(v["required"][3], "factors");
    }

    #[test]
    fn suite_parsing() {
        let s = parse_suites(&["psi", "relations"]).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![Suite::Relations, Suite::Psi]);
        assert!(parse_suites::<&str>(&[]).is_err());
    }
}
