//! Monte Carlo harnesses. Every experiment is a pure function of its config
//! (seed included) and the worker count never changes the report.

pub mod biinf;
pub mod burke;
pub mod crossing;
pub mod exit_tail;
pub mod logmgf;
pub mod rw;
pub mod rw_boundary;
pub mod shape;

use std::time::Instant;

use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::report::ExperimentReport;

pub use biinf::BiinfConfig;
pub use burke::BurkeConfig;
pub use crossing::CrossingConfig;
pub use exit_tail::ExitTailConfig;
pub use logmgf::LogMgfConfig;
pub use rw::RwConfig;
pub use rw_boundary::RwBoundaryConfig;
pub use shape::ShapeConfig;

#[derive(Clone, Debug, PartialEq)]
pub enum Experiment {
    Shape(ShapeConfig),
    LogMgf(LogMgfConfig),
    Burke(BurkeConfig),
    ExitTail(ExitTailConfig),
    Crossing(CrossingConfig),
    Rw(RwConfig),
    RwBoundary(RwBoundaryConfig),
    Biinf(BiinfConfig),
}

pub const NAMES: &[&str] = &["shape", "logmgf", "burke", "exit-tail", "crossing", "rw", "rw-boundary", "biinf"];

impl Experiment {
    pub fn from_settings(name: &str, s: &Settings) -> LabResult<Self> {
        Ok(match name {
            "shape" => Experiment::Shape(ShapeConfig::from_settings(s)?),
            "logmgf" => Experiment::LogMgf(LogMgfConfig::from_settings(s)?),
            "burke" => Experiment::Burke(BurkeConfig::from_settings(s)?),
            "exit-tail" => Experiment::ExitTail(ExitTailConfig::from_settings(s)?),
            "crossing" => Experiment::Crossing(CrossingConfig::from_settings(s)?),
            "rw" => Experiment::Rw(RwConfig::from_settings(s)?),
            "rw-boundary" => Experiment::RwBoundary(RwBoundaryConfig::from_settings(s)?),
            "biinf" => Experiment::Biinf(BiinfConfig::from_settings(s)?),
            other => return config_err(format!("unknown experiment `{other}`")),
        })
    }

    /// Runs on `threads` workers (0 = all cores) and stamps the wall-clock.
    pub fn run(&self, threads: usize) -> LabResult<ExperimentReport> {
        let start = Instant::now();
        let mut report = match self {
            Experiment::Shape(c) => shape::run(c, threads),
            Experiment::LogMgf(c) => logmgf::run(c, threads),
            Experiment::Burke(c) => burke::run(c, threads),
            Experiment::ExitTail(c) => exit_tail::run(c, threads),
            Experiment::Crossing(c) => crossing::run(c, threads),
            Experiment::Rw(c) => rw::run(c, threads),
            Experiment::RwBoundary(c) => rw_boundary::run(c, threads),
            Experiment::Biinf(c) => biinf::run(c, threads),
        }?;
        report.wall_clock_seconds = start.elapsed().as_secs_f64();
        Ok(report)
    }
}

pub(crate) fn check_r(r: f64) -> LabResult<f64> {
    if r > 0.0 && r < 1.0 {
        Ok(r)
    } else {
        config_err(format!("r must lie in (0,1), got {r}"))
    }
}

pub(crate) fn check_p(name: &str, p: f64, r: f64) -> LabResult<f64> {
    if p > r && p < 1.0 {
        Ok(p)
    } else {
        config_err(format!("{name} must lie in (r,1) = ({r},1), got {p}"))
    }
}

pub(crate) fn check_reps(reps: usize) -> LabResult<usize> {
    if reps >= 1 {
        Ok(reps)
    } else {
        config_err("reps must be at least 1")
    }
}

/// `(m+n)^{2/3}`, the transversal fluctuation scale.
pub(crate) fn kpz_scale(m: usize, n: usize) -> f64 {
    ((m + n) as f64).powf(2.0 / 3.0)
}

/// Whether consecutive values are non-increasing, allowing `slack(i)` at step `i -> i+1`.
pub(crate) fn non_increasing_within(values: &[f64], slack: impl Fn(usize) -> f64) -> bool {
    values.windows(2).enumerate().all(|(i, w)| w[1] <= w[0] + slack(i))
}
