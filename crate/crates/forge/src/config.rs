//! JSON run configuration: the simulation and stress fields side by side in
//! one flat object, using the same key names as the core structs
//! (`K`, `T`, `theta_burnout`, ..., `omega_surge`, `sigma_noise`,
//! `rho_turnover`). Missing keys take their defaults; unknown keys are
//! rejected so typos do not silently fall back to a default.

use std::path::Path;

use forge_core::{SimulationConfig, StressConfig};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ForgeError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub simulation: SimulationConfig,
    #[serde(flatten)]
    pub stress: StressConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ForgeError> {
        let text = std::fs::read_to_string(path).map_err(|e| ForgeError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// `origin` only labels error messages.
    pub fn parse(text: &str, origin: &Path) -> Result<Self, ForgeError> {
        let value: Value = serde_json::from_str(text).map_err(|source| ForgeError::Json {
            path: origin.into(),
            source,
        })?;
        let mut merged = serde_json::to_value(RunConfig::default()).expect("defaults serialise");
        overlay(&mut merged, value, "").map_err(|key| ForgeError::UnknownKey {
            path: origin.into(),
            key,
        })?;
        let config: RunConfig =
            serde_json::from_value(merged).map_err(|source| ForgeError::Json {
                path: origin.into(),
                source,
            })?;
        config.validate(origin)?;
        Ok(config)
    }

    pub fn validate(&self, origin: &Path) -> Result<(), ForgeError> {
        let wrap = |source| ForgeError::Config {
            path: origin.into(),
            source,
        };
        self.simulation.validate().map_err(wrap)?;
        self.stress.validate().map_err(wrap)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serialises")
    }
}

/// Writes `given` over `base` key by key, so nested objects may be partial.
/// Returns the dotted path of the first key `base` does not have.
fn overlay(base: &mut Value, given: Value, prefix: &str) -> Result<(), String> {
    let Value::Object(given) = given else {
        *base = given;
        return Ok(());
    };
    let Value::Object(known) = base else {
        *base = Value::Object(given);
        return Ok(());
    };
    for (k, v) in given {
        let path = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match known.get_mut(&k) {
            None => return Err(path),
            // Optional fields serialise as null and accept anything.
            Some(slot @ Value::Null) => *slot = v,
            Some(slot) => overlay(slot, v, &path)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c = RunConfig::parse("{}", Path::new("c.json")).unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn reads_flat_keys() {
        let text = r#"{"K": 50, "T": 120, "theta_burnout": 0.7, "omega_surge": 1.5, "market": {"supply": 8.0}}"#;
        let c = RunConfig::parse(text, Path::new("c.json")).unwrap();
        assert_eq!(c.simulation.num_contractors, 50);
        assert_eq!(c.simulation.horizon, 120);
        assert_eq!(c.simulation.burnout_threshold, 0.7);
        assert_eq!(c.simulation.market.supply, 8.0);
        assert_eq!(c.stress.omega_surge, 1.5);
    }

    #[test]
    fn nested_objects_may_be_partial() {
        let c = RunConfig::parse(
            r#"{"offline_train": {"epochs": 3}, "baselines": {"swucb_window": 40}}"#,
            Path::new("c.json"),
        )
        .unwrap();
        let d = RunConfig::default();
        assert_eq!(c.simulation.offline_train.epochs, 3);
        assert_eq!(
            c.simulation.offline_train.learning_rate,
            d.simulation.offline_train.learning_rate
        );
        assert_eq!(c.simulation.online_train, d.simulation.online_train);
        assert_eq!(c.simulation.baselines.swucb_window, Some(40));
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        let err = RunConfig::parse(r#"{"market": {"suply": 1}}"#, Path::new("c.json")).unwrap_err();
        assert!(err.to_string().contains("market.suply"));
        assert!(RunConfig::parse(r#"{"zeta": 1.5}"#, Path::new("c.json")).is_err());
        assert!(RunConfig::parse(r#"{"rho_turnover": 0.9}"#, Path::new("c.json")).is_err());
    }

    #[test]
    fn round_trips() {
        let mut c = RunConfig::default();
        c.simulation.seed = 9;
        c.stress.sigma_noise = 0.05;
        assert_eq!(
            RunConfig::parse(&c.to_json(), Path::new("c.json")).unwrap(),
            c
        );
    }
}
