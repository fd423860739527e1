//! Whether both extremal geodesics of `G(m,n)` cross the vertical segment
//! centred on the diagonal at column `⌊αm⌋`, and how far they deviate from
//! the straight line there.

use lpp_core::engine::{bulk_passage_reverse, crosses_segment, deviation_at_column, trace_geodesic, TieRule};
use lpp_core::{sample_weight_field, Point, RngStream};
use serde::Serialize;

use super::{check_r, check_reps, kpz_scale, non_increasing_within};
use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::fixtures;
use crate::parallel::replicate;
use crate::report::{Estimate, ExperimentReport};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingConfig {
    pub r: f64,
    pub m: usize,
    pub n: usize,
    pub alpha: f64,
    pub s: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
}

impl Default for CrossingConfig {
    fn default() -> Self {
        CrossingConfig {
            r: 0.25,
            m: 200,
            n: 200,
            alpha: 0.5,
            s: vec![0.05, 0.1, 0.25, 0.5, 1.0, 2.0],
            reps: 10_000,
            seed: 11,
        }
    }
}

impl CrossingConfig {
    pub fn from_settings(st: &Settings) -> LabResult<Self> {
        let d = Self::default();
        let n = st.usize_or("n", d.n)?;
        let c = CrossingConfig {
            r: st.require_f64("r")?,
            m: st.usize_or("m", n)?,
            n,
            alpha: st.f64_or("alpha", d.alpha)?,
            s: st.f64_list("s")?.unwrap_or(d.s),
            reps: st.usize_or("reps", d.reps)?,
            seed: st.u64_or("seed", d.seed)?,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> LabResult<()> {
        check_r(self.r)?;
        check_reps(self.reps)?;
        if self.m < 1 || self.n < 1 {
            return config_err("m and n must be at least 1");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return config_err(format!("alpha must lie in (0,1), got {}; the segment would leave the grid", self.alpha));
        }
        if self.s.is_empty() || self.s.iter().any(|s| !(*s > 0.0)) {
            return config_err("s must be a nonempty list of positive values");
        }
        Ok(())
    }

    pub fn center(&self) -> Point {
        Point::new((self.alpha * self.m as f64).floor() as i64, (self.alpha * self.n as f64).floor() as i64)
    }
}

/// Per level `s`: (both geodesics cross the segment, some geodesic deviates by more than the half-length).
pub fn sample_events(st: &mut RngStream, c: &CrossingConfig, levels: &[f64]) -> LabResult<Vec<(bool, bool)>> {
    let to = Point::new(c.m as i64, c.n as i64);
    let field = sample_weight_field(st, Point::ORIGIN, c.m + 1, c.n + 1, c.r)?;
    let grid = bulk_passage_reverse(&field, to)?;
    let right = trace_geodesic(&grid, Point::ORIGIN, to, TieRule::Rightmost)?;
    let up = trace_geodesic(&grid, Point::ORIGIN, to, TieRule::Upmost)?;
    let center = c.center();
    let scale = kpz_scale(c.m, c.n);
    let dev = |g| deviation_at_column(g, Point::ORIGIN, to, center.x).unwrap_or(f64::INFINITY);
    let worst = dev(&right).max(dev(&up));
    Ok(levels
        .iter()
        .map(|&s| {
            let half = s * scale;
            (crosses_segment(&right, center, half) && crosses_segment(&up, center, half), worst > half)
        })
        .collect())
}

pub fn run(c: &CrossingConfig, threads: usize) -> LabResult<ExperimentReport> {
    c.validate()?;
    let mut levels = c.s.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let events = replicate(threads, c.seed, 0, c.reps, |st| sample_events(st, c, &levels))?;
    let reps = c.reps as u64;
    let mut rep = ExperimentReport::new("crossing", c)?;
    let scale = kpz_scale(c.m, c.n);
    let full = c.n as f64 / scale;
    rep.diagnostic("full_height_s", full);

    let mut cross = Vec::new();
    let mut deviate = Vec::new();
    for (i, &s) in levels.iter().enumerate() {
        let kc = events.iter().filter(|e| e[i].0).count() as u64;
        let kd = events.iter().filter(|e| e[i].1).count() as u64;
        rep.estimates.push(Estimate::probability("crossing", &[("s", s)], kc, reps));
        rep.estimates.push(Estimate::probability("deviation", &[("s", s)], kd, reps));
        cross.push(kc as f64 / reps as f64);
        deviate.push(kd as f64 / reps as f64);
        if s >= full {
            rep.gate(&format!("full_height_s{s}"), kc == reps, format!("segment spans the column; frequency {}", kc as f64 / reps as f64));
        }
    }
    let neg: Vec<f64> = cross.iter().map(|v| -v).collect();
    rep.gate("crossing_non_decreasing", non_increasing_within(&neg, |_| 0.0), format!("{cross:?}"));
    rep.gate("deviation_non_increasing", non_increasing_within(&deviate, |_| 0.0), format!("{deviate:?}"));

    let fx = fixtures::load("crossing")?;
    let fs = fx.threshold("s")?;
    if let Some(i) = levels.iter().position(|&v| v == fs) {
        if calibrated_for(&fx.config, c) {
            let min = fx.threshold("min_frequency")?;
            rep.gate("crossing_frequency", cross[i] >= min, format!("frequency {} at s = {fs} vs fixture {min}", cross[i]));
        } else {
            rep.warnings.push("crossing threshold is calibrated for another configuration; gate skipped".into());
        }
    }
    Ok(rep)
}

fn calibrated_for(fx: &serde_json::Value, c: &CrossingConfig) -> bool {
    fx.get("r").and_then(|v| v.as_f64()) == Some(c.r)
        && fx.get("m").and_then(|v| v.as_u64()) == Some(c.m as u64)
        && fx.get("n").and_then(|v| v.as_u64()) == Some(c.n as u64)
        && fx.get("alpha").and_then(|v| v.as_f64()) == Some(c.alpha)
}
