//! Probability that a geometric-difference random walk stays nonpositive:
//! exact convolution, the Sparre–Andersen series and Monte Carlo.

use lpp_core::{sample_geometric, GeomParam, RngStream};
use serde::Serialize;

use super::check_reps;
use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::oracles::WalkOracle;
use crate::parallel::replicate;
use crate::report::{Estimate, ExperimentReport};
use crate::stats::{loglog_fit, Tested};

/// Steps at which the Monte Carlo estimate is held to the oracle.
pub const CHECKPOINTS: &[usize] = &[1, 5, 10, 20, 40];
pub const SERIES_TOLERANCE: f64 = 1e-8;
/// Allowed relative spread of `√n P(stay)` over `n ∈ [10, 40]`.
pub const SCALING_SPREAD: f64 = 0.10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RwConfig {
    /// Steps are `Geom(p) - Geom(q)`.
    pub p: f64,
    pub q: f64,
    pub n_max: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for RwConfig {
    fn default() -> Self {
        RwConfig { p: 0.5, q: 0.5, n_max: 40, reps: 100_000, seed: 3 }
    }
}

impl RwConfig {
    pub fn from_settings(s: &Settings) -> LabResult<Self> {
        let d = Self::default();
        let p = s.f64_or("p", d.p)?;
        let c = RwConfig {
            p,
            q: s.f64_or("q", p)?,
            n_max: s.usize_or("n", d.n_max)?,
            reps: s.usize_or("reps", d.reps)?,
            seed: s.u64_or("seed", d.seed)?,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> LabResult<()> {
        check_reps(self.reps)?;
        if !(self.p > 0.0 && self.p < 1.0 && self.q > 0.0 && self.q < 1.0) {
            return config_err(format!("step parameters must lie in (0,1), got p={} q={}", self.p, self.q));
        }
        if self.n_max < 1 {
            return config_err("n must be at least 1");
        }
        Ok(())
    }
}

/// Number of leading partial sums that are `<= 0` (capped at `n_max`).
pub fn sample_survival(st: &mut RngStream, c: &RwConfig) -> LabResult<usize> {
    let (gp, gq) = (GeomParam::new(c.p)?, GeomParam::new(c.q)?);
    let mut s = 0i64;
    for k in 0..c.n_max {
        s += sample_geometric(st, gp) as i64 - sample_geometric(st, gq) as i64;
        if s > 0 {
            return Ok(k);
        }
    }
    Ok(c.n_max)
}

pub fn run(c: &RwConfig, threads: usize) -> LabResult<ExperimentReport> {
    c.validate()?;
    let oracle = WalkOracle::geometric_difference(c.p, c.q, c.n_max)?;
    let series = oracle.sparre_andersen();
    let survival = replicate(threads, c.seed, 0, c.reps, |st| sample_survival(st, c))?;
    let reps = c.reps as u64;

    let mut rep = ExperimentReport::new("rw", c)?;
    rep.diagnostic("step_mean", oracle.mean());
    rep.diagnostic("truncation_mass", oracle.truncation_mass);
    rep.diagnostic("support_half_width", oracle.t as f64);

    let series_gap = (1..=c.n_max).map(|n| (series[n] - oracle.stay[n]).abs()).fold(0.0, f64::max);
    rep.diagnostic("series_gap", series_gap);
    rep.gate("oracle_matches_series", series_gap <= SERIES_TOLERANCE, format!("max gap {series_gap:e}"));

    // survival counts: k(n) = #{walks with S_1..S_n <= 0}
    let mut at_least = vec![0u64; c.n_max + 2];
    for &v in &survival {
        at_least[v] += 1;
    }
    for n in (0..=c.n_max).rev() {
        at_least[n] += at_least[n + 1];
    }
    let mut mc = Vec::new();
    let mut worst_z: f64 = 0.0;
    let mut checks_ok = true;
    for n in 1..=c.n_max {
        let k = at_least[n];
        rep.estimates.push(Estimate::probability("stay_nonpositive", &[("n", n as f64)], k, reps));
        let est = k as f64 / reps as f64;
        mc.push(est);
        rep.diagnostic(&format!("oracle_n{n:02}"), oracle.stay[n]);
        if CHECKPOINTS.contains(&n) {
            let g = oracle.stay[n];
            let se = (g * (1.0 - g) / reps as f64).sqrt();
            let z = (est - g).abs() / se;
            worst_z = worst_z.max(z);
            checks_ok &= (est - g).abs() <= 3.0 * se;
        }
    }
    rep.diagnostic("worst_checkpoint_z", worst_z);
    rep.gate("monte_carlo_within_3se", checks_ok, format!("largest |z| at checkpoints {worst_z}"));
    rep.gate("stay_non_increasing", mc.windows(2).all(|w| w[1] <= w[0]), "nested events");

    let ns: Vec<f64> = (1..=c.n_max).map(|n| n as f64).collect();
    if let Tested::Done(f) = loglog_fit(&ns[ns.len().min(9)..], &oracle.stay[10.min(c.n_max + 1)..]) {
        rep.diagnostic("oracle_decay_exponent", f.slope);
    }

    if oracle.mean().abs() < 1e-12 {
        let scaled: Vec<f64> = (10..=c.n_max.min(40)).map(|n| (n as f64).sqrt() * oracle.stay[n]).collect();
        if scaled.len() >= 2 {
            let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = scaled.iter().cloned().fold(0.0, f64::max);
            let spread = (hi - lo) / lo;
            rep.diagnostic("sqrt_n_spread", spread);
            rep.gate("sqrt_n_scaling", spread <= SCALING_SPREAD, format!("relative spread {spread} over n in [10, {}]", c.n_max.min(40)));
        }
    }
    Ok(rep)
}
