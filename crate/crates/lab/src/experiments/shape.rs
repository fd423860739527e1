//! `G(n,n)/n` against the shape function.

use lpp_core::analytics::shape_gamma;
use lpp_core::engine::bulk_passage_forward_to;
use lpp_core::{sample_weight_field, Point};
use serde::Serialize;

use super::{check_r, check_reps};
use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::parallel::replicate;
use crate::report::{Estimate, ExperimentReport};
use crate::stats::mean_se;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeConfig {
    pub r: f64,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// Allowed distance of the mean from `γ(1,1)`.
    pub tolerance: f64,
}

impl Default for ShapeConfig {
    fn default() -> Self {
        ShapeConfig { r: 0.25, n: 400, reps: 100, seed: 1, tolerance: 0.1 }
    }
}

impl ShapeConfig {
    pub fn from_settings(s: &Settings) -> LabResult<Self> {
        let d = Self::default();
        let c = ShapeConfig {
            r: s.require_f64("r")?,
            n: s.usize_or("n", d.n)?,
            reps: s.usize_or("reps", d.reps)?,
            seed: s.u64_or("seed", d.seed)?,
            tolerance: d.tolerance,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> LabResult<()> {
        check_r(self.r)?;
        check_reps(self.reps)?;
        if self.n == 0 {
            return config_err("n must be at least 1");
        }
        Ok(())
    }
}

/// One sample of `G_{0,(n,n)}`.
pub fn sample_passage(stream: &mut lpp_core::RngStream, r: f64, n: usize) -> LabResult<i64> {
    let field = sample_weight_field(stream, Point::ORIGIN, n + 1, n + 1, r)?;
    let target = Point::new(n as i64, n as i64);
    Ok(bulk_passage_forward_to(&field, Point::ORIGIN, target)?.value(target))
}

pub fn run(c: &ShapeConfig, threads: usize) -> LabResult<ExperimentReport> {
    c.validate()?;
    let g = replicate(threads, c.seed, 0, c.reps, |s| sample_passage(s, c.r, c.n))?;
    let scaled: Vec<f64> = g.iter().map(|&v| v as f64 / c.n as f64).collect();
    let m = mean_se(&scaled);
    let gamma = shape_gamma((1.0, 1.0), c.r)?;

    let mut rep = ExperimentReport::new("shape", c)?;
    rep.estimates.push(Estimate::mean("passage_over_n", &[("n", c.n as f64)], m));
    rep.diagnostic("gamma", gamma);
    rep.diagnostic("finite_size_gap", m.mean - gamma);
    rep.gate(
        "shape_limit",
        (m.mean - gamma).abs() <= c.tolerance && m.mean < gamma,
        format!("mean {} vs gamma {gamma}: within {} and below", m.mean, c.tolerance),
    );
    Ok(rep)
}
