//! Pilot-calibrated thresholds, stored as JSON next to the config that
//! produced them. `LPP_LAB_FIXTURES` points at an alternative directory;
//! otherwise the copies compiled into the binary are used.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{LabError, LabResult};

pub const ENV_VAR: &str = "LPP_LAB_FIXTURES";

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Fixture {
    pub description: String,
    /// The run the thresholds were calibrated on.
    pub config: Value,
    pub pilot: BTreeMap<String, f64>,
    pub thresholds: BTreeMap<String, f64>,
}

impl Fixture {
    pub fn threshold(&self, key: &str) -> LabResult<f64> {
        self.thresholds
            .get(key)
            .copied()
            .ok_or_else(|| LabError::Config(format!("fixture lacks threshold `{key}`")))
    }
}

fn embedded(name: &str) -> Option<&'static str> {
    match name {
        "exit_tail" => Some(include_str!("../fixtures/exit_tail.json")),
        "crossing" => Some(include_str!("../fixtures/crossing.json")),
        _ => None,
    }
}

pub fn load(name: &str) -> LabResult<Fixture> {
    let text = match std::env::var_os(ENV_VAR) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(format!("{name}.json"));
            std::fs::read_to_string(&path)
                .map_err(|e| LabError::Config(format!("cannot read fixture {}: {e}", path.display())))?
        }
        None => embedded(name)
            .ok_or_else(|| LabError::Config(format!("no fixture named `{name}`")))?
            .to_string(),
    };
    serde_json::from_str(&text).map_err(|e| LabError::Config(format!("fixture `{name}` is malformed: {e}")))
}
