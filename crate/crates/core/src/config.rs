//! TOML run configuration. Every section has complete defaults, so an empty
//! file describes the nominal scenario.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cartography::{MapBase, MapSpec};
use crate::coupling::ScenarioConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateSpec {
    pub e_values: Vec<f64>,
    pub q_values: Vec<f64>,
    /// Love number; `None` uses Miranda's elastic value.
    pub k2: Option<f64>,
    /// km
    pub a: f64,
    /// J/kg/K
    pub cp: f64,
}

impl Default for EstimateSpec {
    fn default() -> Self {
        Self {
            e_values: (0..=20).map(|i| 0.005 * i as f64).collect(),
            q_values: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0],
            k2: None,
            a: 129_900.0,
            cp: 900.0,
        }
    }
}

impl EstimateSpec {
    pub fn validate(&self) -> Result<()> {
        if self.e_values.is_empty() || self.q_values.is_empty() {
            return Err(Error::Config("estimate.e_values and estimate.q_values must be non-empty".into()));
        }
        if self.e_values.iter().any(|e| !(0.0..1.0).contains(e)) {
            return Err(Error::Config("estimate.e_values must lie in [0, 1)".into()));
        }
        if self.q_values.iter().any(|q| !(*q > 0.0)) {
            return Err(Error::Config("estimate.q_values must be > 0".into()));
        }
        if !(self.a > 0.0 && self.cp > 0.0) || self.k2.is_some_and(|k| !(k > 0.0)) {
            return Err(Error::Config("estimate.a, estimate.cp and estimate.k2 must be > 0".into()));
        }
        Ok(())
    }
}

/// Q against melting temperature for the three rheologies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RheologySweep {
    /// K
    pub t_melt_min: f64,
    pub t_melt_max: f64,
    pub n: usize,
    /// Mean temperature, K; `None` uses Miranda's warm initial profile.
    pub t_mean: Option<f64>,
}

impl Default for RheologySweep {
    fn default() -> Self {
        Self { t_melt_min: 180.0, t_melt_max: 273.0, n: 94, t_mean: None }
    }
}

impl RheologySweep {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_melt_min > 0.0 && self.t_melt_max > self.t_melt_min) || self.n < 2 {
            return Err(Error::Config("rheology_sweep needs 0 < t_melt_min < t_melt_max and n >= 2".into()));
        }
        if self.t_mean.is_some_and(|t| !(t > 0.0)) {
            return Err(Error::Config("rheology_sweep.t_mean must be > 0".into()));
        }
        Ok(())
    }

    pub fn t_melt_values(&self) -> Vec<f64> {
        let d = (self.t_melt_max - self.t_melt_min) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.t_melt_min + i as f64 * d).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub scenario: ScenarioConfig,
    pub map: MapSpec,
    pub map_base: MapBase,
    pub estimate: EstimateSpec,
    pub rheology_sweep: RheologySweep,
}

impl Config {
    /// Parse `text` on top of the defaults, or on top of a named scenario
    /// preset. Keys in `text` override the preset.
    pub fn from_toml(text: &str, preset: Option<&str>) -> Result<Self> {
        // parse once as-is so unknown keys and type errors carry line context
        let plain: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = match preset {
            None => plain,
            Some(name) => {
                let base = Config { scenario: ScenarioConfig::preset(name)?, ..Config::default() };
                let mut merged = toml::Table::try_from(&base).map_err(|e| Error::Config(e.to_string()))?;
                let user: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
                merge(&mut merged, user);
                merged.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let scope = |section: &'static str| move |e: Error| Error::Config(format!("[{section}] {}", strip(e)));
        self.scenario.validate().map_err(scope("scenario"))?;
        self.map.validate().map_err(scope("map"))?;
        self.map_base.planet.validate().map_err(scope("map_base"))?;
        self.estimate.validate()?;
        self.rheology_sweep.validate()?;
        Ok(())
    }

    /// Canonical TOML of the resolved configuration.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of [`Config::canonical`].
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Digest that ignores the scenario duration, so a checkpoint can be
    /// extended by resuming with a longer run.
    pub fn checkpoint_digest(&self) -> String {
        let mut c = self.clone();
        c.scenario.duration = 0.0;
        c.digest()
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

fn merge(into: &mut toml::Table, from: toml::Table) {
    for (k, v) in from {
        match (into.get_mut(&k), v) {
            (Some(toml::Value::Table(dst)), toml::Value::Table(src)) => merge(dst, src),
            (_, v) => {
                into.insert(k, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rheology::RheologyModel;

    #[test]
    fn empty_config_is_nominal() {
        let c = Config::from_toml("", None).unwrap();
        assert_eq!(c.scenario, ScenarioConfig::nominal());
        assert_eq!(c, Config::default());
    }

    #[test]
    fn canonical_form_round_trips() {
        let c = Config::from_toml("", Some("extremal-burgers")).unwrap();
        let back = Config::from_toml(&c.canonical(), None).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.digest(), c.digest());
        assert_eq!(c.digest().len(), 64);
        let mut longer = c.clone();
        longer.scenario.duration *= 2.0;
        assert_ne!(longer.digest(), c.digest());
        assert_eq!(longer.checkpoint_digest(), c.checkpoint_digest());
    }

    #[test]
    fn preset_then_overrides() {
        let c = Config::from_toml("[scenario]\nduration = 1000.0\n", Some("extremal-andrade")).unwrap();
        assert_eq!(c.scenario.rheology_inner.model, RheologyModel::Andrade);
        assert_eq!(c.scenario.e_inner, Some(0.5));
        assert_eq!(c.scenario.duration, 1000.0);
        assert_ne!(c.digest(), Config::default().digest());
    }

    #[test]
    fn errors_name_the_key() {
        let e = Config::from_toml("[scenario]\nduraton = 5.0\n", None).unwrap_err().to_string();
        assert!(e.contains("duraton") && e.contains("line 2"), "{e}");
        let e = Config::from_toml("[map]\nn_a = \"many\"\n", None).unwrap_err().to_string();
        assert!(e.contains("n_a"), "{e}");
        let e = Config::from_toml("[scenario]\nduration = -5.0\n", None).unwrap_err().to_string();
        assert!(e.contains("scenario") && e.contains("duration"), "{e}");
        assert!(Config::from_toml("", Some("nope")).is_err());
    }

    #[test]
    fn nested_tables_parse() {
        let text = "[scenario.rheology_inner]\nmodel = \"burgers\"\n[scenario.placement]\nkind = \"elements\"\n\
                    [map]\nmodel = \"direct\"\ncolor = \"log\"\n";
        let c = Config::from_toml(text, None).unwrap();
        assert_eq!(c.scenario.rheology_inner.model, RheologyModel::Burgers);
        assert_eq!(c.scenario.placement, crate::coupling::Placement::Elements);
        assert_eq!(c.map.color, crate::cartography::ColorScale::Log);
    }
}
