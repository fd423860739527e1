//! Finite-N surrogate for bi-infinite geodesics: the probability that some
//! geodesic from the southwest boundary arc to the northeast arc of
//! `[-N, N]^2` uses the edge `(0, e1)`.

use lpp_core::engine::{column_from, column_to, edge_usage_from_columns};
use lpp_core::{sample_weight_field, Point, RngStream, Weights};
use serde::Serialize;

use super::{check_r, check_reps};
use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::parallel::replicate;
use crate::report::{Estimate, ExperimentReport};
use crate::stats::{loglog_fit, Tested};

/// Per-run memory ceiling for the fields and retained columns.
pub const MEMORY_BUDGET_BYTES: u64 = 4 << 30;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiinfConfig {
    pub r: f64,
    pub delta: f64,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

impl Default for BiinfConfig {
    fn default() -> Self {
        BiinfConfig { r: 0.25, delta: 0.25, sizes: vec![24, 48, 96], reps: 500, seed: 13 }
    }
}

impl BiinfConfig {
    pub fn from_settings(s: &Settings) -> LabResult<Self> {
        let d = Self::default();
        let c = BiinfConfig {
            r: s.require_f64("r")?,
            delta: s.f64_or("delta", d.delta)?,
            sizes: s.usize_list("size")?.unwrap_or(d.sizes),
            reps: s.usize_or("reps", d.reps)?,
            seed: s.u64_or("seed", d.seed)?,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> LabResult<()> {
        check_r(self.r)?;
        check_reps(self.reps)?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return config_err(format!("delta must lie in (0,1), got {}", self.delta));
        }
        if self.sizes.is_empty() {
            return config_err("at least one size N is required");
        }
        for &n in &self.sizes {
            let (src, dst) = boundary_arcs(n, self.delta);
            if src.is_empty() || dst.is_empty() {
                return config_err(format!("N = {n} leaves an empty boundary arc at delta = {}", self.delta));
            }
        }
        Ok(())
    }
}

/// Bytes held by one replicate of size `n`: the weights plus one column
/// per boundary anchor.
pub fn replicate_bytes(n: usize, delta: f64) -> u64 {
    let side = 2 * n as u64 + 1;
    let (src, dst) = boundary_arcs(n, delta);
    side * side * 4 + (src.len() + dst.len()) as u64 * side * 8
}

/// `∂^{N,δ}` (southwest) and `∂̂^{N,δ}` (northeast) as lattice points.
pub fn boundary_arcs(n: usize, delta: f64) -> (Vec<Point>, Vec<Point>) {
    let n = n as i64;
    let cut = (delta * n as f64).ceil() as i64;
    let mut src = Vec::new();
    let mut dst = Vec::new();
    if cut > n {
        return (src, dst);
    }
    for y in -n..=-cut {
        src.push(Point::new(-n, y));
    }
    for x in -n + 1..=-cut {
        src.push(Point::new(x, -n));
    }
    for y in cut..=n {
        dst.push(Point::new(n, y));
    }
    for x in cut..n {
        dst.push(Point::new(x, n));
    }
    (src, dst)
}

/// The union event evaluated through the column decomposition.
pub fn edge_event<W: Weights + ?Sized>(field: &W, n: usize, delta: f64) -> LabResult<bool> {
    let (src, dst) = boundary_arcs(n, delta);
    let n = n as i64;
    let a = src.iter().map(|&u| column_from(field, u, 0, n)).collect::<Result<Vec<_>, _>>()?;
    let b = dst.iter().map(|&v| column_to(field, v, 1, -n)).collect::<Result<Vec<_>, _>>()?;
    Ok(a.iter().any(|ca| b.iter().any(|cb| edge_usage_from_columns(ca, cb))))
}

pub fn sample_event(st: &mut RngStream, r: f64, n: usize, delta: f64) -> LabResult<bool> {
    let side = 2 * n + 1;
    let field = sample_weight_field(st, Point::new(-(n as i64), -(n as i64)), side, side, r)?;
    edge_event(&field, n, delta)
}

pub fn run(c: &BiinfConfig, threads: usize) -> LabResult<ExperimentReport> {
    c.validate()?;
    let workers = if threads == 0 { rayon::current_num_threads() } else { threads } as u64;
    let need = c.sizes.iter().map(|&n| replicate_bytes(n, c.delta)).max().unwrap_or(0) * workers;
    if need > MEMORY_BUDGET_BYTES {
        return config_err(format!("needs about {need} bytes for {workers} workers; budget is {MEMORY_BUDGET_BYTES}"));
    }

    let mut rep = ExperimentReport::new("biinf", c)?;
    let mut probs = Vec::new();
    let mut ses = Vec::new();
    for (cell, &n) in c.sizes.iter().enumerate() {
        let hits = replicate(threads, c.seed, cell as u32, c.reps, |st| sample_event(st, c.r, n, c.delta))?;
        let k = hits.iter().filter(|&&h| h).count() as u64;
        let e = Estimate::probability("edge_event", &[("n", n as f64)], k, c.reps as u64);
        probs.push(e.estimate);
        ses.push(e.se);
        rep.estimates.push(e);
        let large_enough = n as f64 >= 8.0 / c.delta.powi(3);
        rep.diagnostic(&format!("n{n}_meets_size_condition"), f64::from(u8::from(large_enough)));
    }

    let mut order: Vec<usize> = (0..c.sizes.len()).collect();
    order.sort_by_key(|&i| c.sizes[i]);
    let ok = order
        .windows(2)
        .all(|w| probs[w[1]] <= probs[w[0]] + 2.0 * (ses[w[0]].powi(2) + ses[w[1]].powi(2)).sqrt());
    let shown: Vec<(usize, f64)> = order.iter().map(|&i| (c.sizes[i], probs[i])).collect();
    rep.gate("non_increasing_within_2se", ok, format!("{shown:?}"));

    let ns: Vec<f64> = order.iter().map(|&i| c.sizes[i] as f64).collect();
    let ps: Vec<f64> = order.iter().map(|&i| probs[i]).collect();
    if let Tested::Done(f) = loglog_fit(&ns, &ps) {
        rep.diagnostic("decay_exponent", f.slope);
    }
    Ok(rep)
}
