use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use randcal_radial::Rational;
use randcal_symcalc::parse_rational;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20240611;

/// A typed parameter value. Rationals travel as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Float(f64),
    Text(String),
}

/// Everything a run depends on; `(config, seed)` determines the output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Space-separated command path, e.g. `"verify counterexample"`.
    pub subcommand: String,
    #[serde(default)]
    pub params: BTreeMap<String, Param>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_out() -> PathBuf {
    PathBuf::from("randcal-out")
}

impl RunConfig {
    pub fn new(subcommand: impl Into<String>) -> Self {
        Self { subcommand: subcommand.into(), params: BTreeMap::new(), seed: DEFAULT_SEED, out: default_out() }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn set(&mut self, key: &str, value: Param) {
        self.params.insert(key.to_string(), value);
    }

    fn get(&self, key: &str) -> Option<&Param> {
        self.params.get(key)
    }

    pub fn int(&self, key: &str, default: i64) -> Result<i64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(Param::Int(i)) => Ok(*i),
            Some(Param::Text(s)) => s.trim().parse().map_err(|_| bad(key, "an integer")),
            Some(_) => Err(bad(key, "an integer")),
        }
    }

    pub fn uint(&self, key: &str, default: u32) -> Result<u32, CliError> {
        u32::try_from(self.int(key, default as i64)?).map_err(|_| bad(key, "a non-negative integer"))
    }

    pub fn float(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(Param::Int(i)) => Ok(*i as f64),
            Some(Param::Float(x)) => Ok(*x),
            Some(Param::Text(s)) => match parse_rational(s) {
                Some(r) => Ok(randcal_radial::to_f64(&r)),
                None => s.trim().parse().map_err(|_| bad(key, "a number")),
            },
        }
    }

    pub fn rational(&self, key: &str, default: &str) -> Result<Rational, CliError> {
        let text = match self.get(key) {
            None => default.to_string(),
            Some(Param::Int(i)) => i.to_string(),
            Some(Param::Text(s)) => s.clone(),
            Some(Param::Float(_)) => return Err(bad(key, "a rational \"p/q\" string")),
        };
        parse_rational(&text).ok_or_else(|| bad(key, "a rational \"p/q\" string"))
    }

    pub fn text(&self, key: &str, default: &str) -> Result<String, CliError> {
        match self.get(key) {
            None => Ok(default.to_string()),
            Some(Param::Text(s)) => Ok(s.clone()),
            Some(_) => Err(bad(key, "a string")),
        }
    }

    pub fn opt_text(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(Param::Text(s)) => Ok(Some(s.clone())),
            Some(_) => Err(bad(key, "a string")),
        }
    }

    /// Comma-separated unsigned integers, e.g. `"1,5,7"`.
    pub fn uint_list(&self, key: &str, default: &[u32]) -> Result<Vec<u32>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(Param::Int(i)) => Ok(vec![u32::try_from(*i).map_err(|_| bad(key, "non-negative integers"))?]),
            Some(Param::Text(s)) => s
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad(key, "comma-separated non-negative integers")))
                .collect(),
            Some(_) => Err(bad(key, "comma-separated non-negative integers")),
        }
    }

    /// Rejects parameters the subcommand does not understand.
    pub fn expect_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::Config(format!(
                "unknown parameter {k:?} for {:?}; expected one of {allowed:?}",
                self.subcommand
            ))),
            None => Ok(()),
        }
    }
}

fn bad(key: &str, what: &str) -> CliError {
    CliError::Config(format!("parameter {key:?} must be {what}"))
}
