//! Experiment reports and their JSON / CSV serializations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::LabResult;
use crate::stats::{wilson_interval, MeanSe};

/// One estimated quantity at one parameter cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub quantity: String,
    pub params: BTreeMap<String, f64>,
    pub estimate: f64,
    pub se: f64,
    pub n: usize,
    /// Wilson interval, present for probabilities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
}

impl Estimate {
    pub fn mean(quantity: &str, params: &[(&str, f64)], m: MeanSe) -> Self {
        Estimate {
            quantity: quantity.into(),
            params: to_map(params),
            estimate: m.mean,
            se: m.se,
            n: m.n,
            interval: None,
        }
    }

    pub fn probability(quantity: &str, params: &[(&str, f64)], k: u64, n: u64) -> Self {
        let p = k as f64 / n as f64;
        Estimate {
            quantity: quantity.into(),
            params: to_map(params),
            estimate: p,
            se: (p * (1.0 - p) / n as f64).sqrt(),
            n: n as usize,
            interval: Some(wilson_interval(k, n)),
        }
    }
}

fn to_map(params: &[(&str, f64)]) -> BTreeMap<String, f64> {
    params.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestStatistic {
    pub name: String,
    pub statistic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub gate: String,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    pub config: Value,
    pub estimates: Vec<Estimate>,
    pub tests: Vec<TestStatistic>,
    pub diagnostics: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: &impl Serialize) -> LabResult<Self> {
        Ok(ExperimentReport {
            experiment: experiment.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: serde_json::to_value(config)?,
            estimates: Vec::new(),
            tests: Vec::new(),
            diagnostics: BTreeMap::new(),
            verdicts: Vec::new(),
            warnings: Vec::new(),
            wall_clock_seconds: 0.0,
        })
    }

    pub fn gate(&mut self, gate: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            gate: gate.into(),
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
            detail: detail.into(),
        });
    }

    pub fn inconclusive(&mut self, gate: &str, detail: impl Into<String>) {
        self.verdicts.push(Verdict { gate: gate.into(), outcome: Outcome::Inconclusive, detail: detail.into() });
    }

    pub fn diagnostic(&mut self, name: &str, value: f64) {
        self.diagnostics.insert(name.into(), value);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome == Outcome::Pass)
    }

    pub fn verdict(&self, gate: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.gate == gate)
    }

    pub fn find(&self, quantity: &str, param: &str, value: f64) -> Option<&Estimate> {
        self.estimates
            .iter()
            .find(|e| e.quantity == quantity && e.params.get(param) == Some(&value))
    }

    pub fn to_json(&self) -> LabResult<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// JSON with the wall-clock field zeroed: a pure function of the config.
    pub fn canonical_json(&self) -> LabResult<String> {
        let mut r = self.clone();
        r.wall_clock_seconds = 0.0;
        r.to_json()
    }

    /// Flat estimate table: `experiment,quantity,<param names>,estimate,se,n`.
    /// Parameter columns are the union over rows, sorted; absent cells are empty.
    pub fn to_csv(&self) -> String {
        let mut names: Vec<&str> = self.estimates.iter().flat_map(|e| e.params.keys().map(String::as_str)).collect();
        names.sort_unstable();
        names.dedup();
        let mut out = String::from("experiment,quantity");
        for n in &names {
            let _ = write!(out, ",{n}");
        }
        out.push_str(",estimate,se,n\n");
        for e in &self.estimates {
            let _ = write!(out, "{},{}", self.experiment, e.quantity);
            for n in &names {
                match e.params.get(*n) {
                    Some(v) => {
                        let _ = write!(out, ",{v}");
                    }
                    None => out.push(','),
                }
            }
            let _ = writeln!(out, ",{},{},{}", e.estimate, e.se, e.n);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = ExperimentReport::new("exit-tail", &serde_json::json!({"r": 0.25})).unwrap();
        r.estimates.push(Estimate::probability("tail", &[("s", 0.5)], 3, 4));
        r.estimates.push(Estimate::probability("tail", &[("s", 1.0)], 0, 4));
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "experiment,quantity,s,estimate,se,n");
        assert!(lines[1].starts_with("exit-tail,tail,0.5,0.75,"));
        assert_eq!(lines[2], "exit-tail,tail,1,0,0,4");
        assert_eq!(r.estimates[1].interval.unwrap().0, 0.0);
    }

    #[test]
    fn canonical_json_ignores_timing() {
        let mut a = ExperimentReport::new("x", &1).unwrap();
        let mut b = a.clone();
        a.wall_clock_seconds = 1.5;
        b.wall_clock_seconds = 7.0;
        assert_ne!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
    }
}
