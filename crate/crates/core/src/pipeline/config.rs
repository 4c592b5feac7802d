use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Survey ingestion and split settings, loadable from a `key = value` file.
///
/// ```text
/// # UJIIndoorLoc-style survey
/// sentinel_value = 100
/// threshold_dbm = none
/// ap_prefix = WAP,AP
/// n_target = 16
/// train_fraction = 0.7
/// seed = 7
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// RSS value that means "not detected".
    pub sentinel_value: f64,
    /// Detected readings weaker than this count as not heard.
    pub threshold_dbm: Option<f64>,
    /// Column-name prefixes that mark access-point columns.
    pub ap_prefixes: Vec<String>,
    pub floor_column: String,
    pub building_column: String,
    pub location_column: String,
    pub min_floor: i32,
    pub max_floor: Option<i32>,
    pub n_target: usize,
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            sentinel_value: 100.0,
            threshold_dbm: None,
            ap_prefixes: vec!["WAP".into(), "AP".into()],
            floor_column: "FLOOR".into(),
            building_column: "BUILDINGID".into(),
            location_column: "SPACEID".into(),
            min_floor: 0,
            max_floor: None,
            n_target: 16,
            train_fraction: 0.7,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sentinel_value.is_finite() {
            return Err(Error::Config("sentinel_value must be finite".into()));
        }
        if self.threshold_dbm.is_some_and(|t| !t.is_finite()) {
            return Err(Error::Config("threshold_dbm must be finite".into()));
        }
        if self.ap_prefixes.is_empty() || self.ap_prefixes.iter().any(|p| p.is_empty()) {
            return Err(Error::Config("ap_prefix needs at least one non-empty prefix".into()));
        }
        if self.max_floor.is_some_and(|m| m < self.min_floor) {
            return Err(Error::Config("max_floor is below min_floor".into()));
        }
        if self.n_target < 2 || !self.n_target.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.n_target));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidSplit(self.train_fraction));
        }
        Ok(())
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| Error::Parse {
        line,
        reason: format!("{key}: {e}"),
    })
}

fn parse_optional<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    if value.eq_ignore_ascii_case("none") || value.is_empty() {
        Ok(None)
    } else {
        parse_value(key, value, line).map(Some)
    }
}

impl FromStr for PipelineConfig {
    type Err = Error;

    /// Unset keys keep their defaults; unknown keys are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (key, value) = text.split_once('=').ok_or_else(|| Error::Parse {
                line,
                reason: format!("expected `key = value`, got `{text}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "sentinel_value" => cfg.sentinel_value = parse_value(key, value, line)?,
                "threshold_dbm" => cfg.threshold_dbm = parse_optional(key, value, line)?,
                "ap_prefix" => {
                    cfg.ap_prefixes = value.split(',').map(|p| p.trim().to_string()).collect()
                }
                "floor_column" => cfg.floor_column = value.to_string(),
                "building_column" => cfg.building_column = value.to_string(),
                "location_column" => cfg.location_column = value.to_string(),
                "min_floor" => cfg.min_floor = parse_value(key, value, line)?,
                "max_floor" => cfg.max_floor = parse_optional(key, value, line)?,
                "n_target" => cfg.n_target = parse_value(key, value, line)?,
                "train_fraction" => cfg.train_fraction = parse_value(key, value, line)?,
                "seed" => cfg.seed = parse_value(key, value, line)?,
                other => {
                    return Err(Error::Parse {
                        line,
                        reason: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
        writeln!(f, "sentinel_value = {}", self.sentinel_value)?;
        writeln!(f, "threshold_dbm = {}", opt(self.threshold_dbm.map(|t| t.to_string())))?;
        writeln!(f, "ap_prefix = {}", self.ap_prefixes.join(","))?;
        writeln!(f, "floor_column = {}", self.floor_column)?;
        writeln!(f, "building_column = {}", self.building_column)?;
        writeln!(f, "location_column = {}", self.location_column)?;
        writeln!(f, "min_floor = {}", self.min_floor)?;
        writeln!(f, "max_floor = {}", opt(self.max_floor.map(|m| m.to_string())))?;
        writeln!(f, "n_target = {}", self.n_target)?;
        writeln!(f, "train_fraction = {}", self.train_fraction)?;
        writeln!(f, "seed = {}", self.seed)
    }
}
