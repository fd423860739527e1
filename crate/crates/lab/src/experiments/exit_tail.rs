//! Tail of the exit point of the stationary model at the diagonal corner.

use lpp_core::analytics::pbar;
use lpp_core::engine::{exit_extremes, sample_stationary_boundary, sw_boundary_passage};
use lpp_core::{sample_weight_field, Point, RngStream};
use serde::Serialize;

use super::{check_p, check_r, check_reps, kpz_scale};
use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::fixtures;
use crate::parallel::replicate;
use crate::report::{Estimate, ExperimentReport};
use crate::stats::{linear_fit, Tested};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExitTailConfig {
    pub r: f64,
    pub p: f64,
    /// Target `(n, n)`.
    pub n: usize,
    pub s: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    /// `p` must be within `kappa (2n)^{-1/3}` of the characteristic value.
    pub kappa: f64,
}

impl Default for ExitTailConfig {
    fn default() -> Self {
        ExitTailConfig { r: 0.25, p: 0.5, n: 200, s: vec![0.5, 1.0, 1.5, 2.0], reps: 20_000, seed: 7, kappa: 1.0 }
    }
}

impl ExitTailConfig {
    pub fn from_settings(st: &Settings) -> LabResult<Self> {
        let d = Self::default();
        let r = check_r(st.require_f64("r")?)?;
        let n = st.usize_or("n", d.n)?;
        let c = ExitTailConfig {
            r,
            p: match st.f64("p")? {
                Some(p) => p,
                None => pbar((1.0, 1.0), r)?,
            },
            n,
            s: st.f64_list("s")?.unwrap_or(d.s),
            reps: st.usize_or("reps", d.reps)?,
            seed: st.u64_or("seed", d.seed)?,
            kappa: d.kappa,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> LabResult<()> {
        check_r(self.r)?;
        check_p("p", self.p, self.r)?;
        check_reps(self.reps)?;
        if self.n < 1 {
            return config_err("n must be at least 1");
        }
        if self.s.is_empty() || self.s.iter().any(|s| *s < 0.0) {
            return config_err("s must be a nonempty list of nonnegative values");
        }
        let nf = self.n as f64;
        let slack = self.kappa * (2.0 * nf).powf(-1.0 / 3.0);
        let target = pbar((nf, nf), self.r)?;
        if (self.p - target).abs() > slack {
            return config_err(format!(
                "p = {} is not characteristic for the diagonal: pbar = {target}, allowed distance {slack}",
                self.p
            ));
        }
        Ok(())
    }
}

/// `max(|Z^{e1}|, |Z^{e2}|)` for one stationary sample with target `(n, n)`.
pub fn sample_exit_magnitude(s: &mut RngStream, r: f64, p: f64, n: usize) -> LabResult<i64> {
    let b = sample_stationary_boundary(s, Point::ORIGIN, n, n, r, p)?;
    let field = sample_weight_field(s, Point::new(1, 1), n, n, r)?;
    let g = sw_boundary_passage(&field, &b)?;
    let e = exit_extremes(&g, b.far_corner())?;
    Ok(e.z_e1.abs().max(e.z_e2.abs()))
}

pub fn run(c: &ExitTailConfig, threads: usize) -> LabResult<ExperimentReport> {
    c.validate()?;
    let z = replicate(threads, c.seed, 0, c.reps, |s| sample_exit_magnitude(s, c.r, c.p, c.n))?;
    let scale = kpz_scale(c.n, c.n);
    let mut rep = ExperimentReport::new("exit-tail", c)?;
    rep.diagnostic("scale", scale);

    let mut sorted = c.s.clone();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut probs = Vec::new();
    for &s in &sorted {
        let level = s * scale;
        if level > c.n as f64 {
            rep.warnings.push(format!("s = {s}: level {level} exceeds the largest possible exit {}; probability is 0", c.n));
        }
        let k = z.iter().filter(|&&v| v as f64 >= level).count() as u64;
        rep.estimates.push(Estimate::probability("exit_tail", &[("s", s)], k, c.reps as u64));
        probs.push(k as f64 / c.reps as f64);
    }

    if probs.len() >= 2 {
        let strict = probs.windows(2).all(|w| w[1] < w[0]);
        rep.gate("strictly_decreasing", strict, format!("{probs:?} over s = {sorted:?}"));
    }

    let pos: Vec<(f64, f64)> = sorted.iter().zip(&probs).filter(|(_, p)| **p > 0.0).map(|(s, p)| (s.powi(3), p.ln())).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = pos.into_iter().unzip();
    match linear_fit(&xs, &ys) {
        Tested::Done(f) => {
            rep.diagnostic("cubic_slope", f.slope);
            rep.diagnostic("cubic_r_squared", f.r_squared);
            rep.gate("cubic_slope_negative", f.slope < 0.0, format!("slope of log P on s^3: {}", f.slope));
        }
        Tested::Inconclusive(why) => rep.inconclusive("cubic_slope_negative", why),
    }

    let at = |s: f64| sorted.iter().position(|&v| v == s).map(|i| probs[i]);
    if let (Some(p1), Some(p2)) = (at(1.0), at(2.0)) {
        let fx = fixtures::load("exit_tail")?;
        if calibrated_for(&fx.config, c) {
            let max_ratio = fx.threshold("max_ratio_s2_over_s1")?;
            if p1 == 0.0 {
                rep.inconclusive("decay_ratio", "no exceedances at s = 1");
            } else {
                let ratio = p2 / p1;
                rep.diagnostic("ratio_s2_over_s1", ratio);
                rep.gate("decay_ratio", ratio <= max_ratio, format!("P(2)/P(1) = {ratio} vs fixture {max_ratio}"));
            }
        } else {
            rep.warnings.push("decay-ratio threshold is calibrated for another configuration; gate skipped".into());
        }
    }
    Ok(rep)
}

fn calibrated_for(fx: &serde_json::Value, c: &ExitTailConfig) -> bool {
    fx.get("r").and_then(|v| v.as_f64()) == Some(c.r)
        && fx.get("p").and_then(|v| v.as_f64()) == Some(c.p)
        && fx.get("n").and_then(|v| v.as_u64()) == Some(c.n as u64)
}
