//! Burke property of the stationary model: increments along a down-right
//! staircase are independent, `I ~ Geom(p)` and `J ~ Geom(r/p)`; a coupled
//! pair of boundaries keeps its order throughout the bulk.

use lpp_core::engine::{increment_fields, sample_stationary_boundary, sw_boundary_passage, StationaryBoundary};
use lpp_core::lattice::Axis;
use lpp_core::queueing::sample_coupled_boundary;
use lpp_core::{sample_weight_field, Point, RngStream, Weights};
use serde::Serialize;

use super::{check_p, check_r, check_reps};
use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::parallel::replicate;
use crate::report::{Estimate, ExperimentReport, TestStatistic};
use crate::stats::{chi_square_geometric, cross_correlation, lag_correlation, mean_se, Tested};

pub const SIGNIFICANCE: f64 = 0.001;
const MAX_BINS: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BurkeConfig {
    pub r: f64,
    pub p: f64,
    /// Parameter of the second boundary in the coupled pair, `p < q < 1`.
    pub q: f64,
    pub size: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for BurkeConfig {
    fn default() -> Self {
        BurkeConfig { r: 0.25, p: 0.5, q: 0.75, size: 200, reps: 50, seed: 1 }
    }
}

impl BurkeConfig {
    pub fn from_settings(s: &Settings) -> LabResult<Self> {
        let d = Self::default();
        let r = s.require_f64("r")?;
        let p = s.require_f64("p")?;
        let c = BurkeConfig {
            r,
            p,
            q: s.f64_or("q", (p + 1.0) / 2.0)?,
            size: s.usize_or("size", d.size)?,
            reps: s.usize_or("reps", d.reps)?,
            seed: s.u64_or("seed", d.seed)?,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> LabResult<()> {
        check_r(self.r)?;
        check_p("p", self.p, self.r)?;
        check_p("q", self.q, self.r)?;
        check_reps(self.reps)?;
        if self.q < self.p {
            return config_err(format!("coupled partner q={} must be at least p={}", self.q, self.p));
        }
        if self.size < 2 {
            return config_err(format!("grid size {} too small for a staircase away from the axes", self.size));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
struct Sample {
    i: Vec<u64>,
    j: Vec<u64>,
    recovery_violations: u64,
    interior_sites: u64,
    domination_violations: u64,
    domination_checks: u64,
}

/// Increments along the staircase `(0,N) -> (1,N) -> (1,N-1) -> ... -> (N,0)`:
/// `I` on its horizontal edges and `J` on its vertical edges.
fn staircase(grid: &lpp_core::engine::PassageGrid, n: i64) -> (Vec<u64>, Vec<u64>) {
    let mut i = Vec::with_capacity(n as usize);
    let mut j = Vec::with_capacity(n as usize);
    for k in 0..n {
        let a = Point::new(k, n - k);
        let b = Point::new(k + 1, n - k);
        let c = Point::new(k + 1, n - k - 1);
        i.push((grid.value(b) - grid.value(a)) as u64);
        j.push((grid.value(b) - grid.value(c)) as u64);
    }
    (i, j)
}

fn one_replicate(s: &mut RngStream, c: &BurkeConfig) -> LabResult<Sample> {
    let n = c.size;
    let b = sample_stationary_boundary(s, Point::ORIGIN, n, n, c.r, c.p)?;
    let field = sample_weight_field(s, Point::new(1, 1), n, n, c.r)?;
    let g = sw_boundary_passage(&field, &b)?;
    let (i, j) = staircase(&g, n as i64);

    let ti = increment_fields(&g, Axis::E1);
    let tj = increment_fields(&g, Axis::E2);
    let mut out = Sample { i, j, ..Sample::default() };
    for y in 1..=n as i64 {
        for x in 1..=n as i64 {
            let z = Point::new(x, y);
            out.interior_sites += 1;
            if ti.value(z).min(tj.value(z)) != i64::from(field.weight(z)) {
                out.recovery_violations += 1;
            }
        }
    }

    // coupled boundaries driven through the same bulk
    let cb = sample_coupled_boundary(s, c.r, c.p, c.q, n, n)?;
    let g1 = sw_boundary_passage(&field, &StationaryBoundary::new(Point::ORIGIN, cb.i1.clone(), cb.j1.clone()))?;
    let g2 = sw_boundary_passage(&field, &StationaryBoundary::new(Point::ORIGIN, cb.i2.clone(), cb.j2.clone()))?;
    let (i1, j1) = (increment_fields(&g1, Axis::E1), increment_fields(&g1, Axis::E2));
    let (i2, j2) = (increment_fields(&g2, Axis::E1), increment_fields(&g2, Axis::E2));
    for k in 0..n {
        out.domination_checks += 2;
        out.domination_violations += u64::from(cb.i1[k] > cb.i2[k]) + u64::from(cb.j2[k] > cb.j1[k]);
    }
    for y in 1..=n as i64 {
        for x in 1..=n as i64 {
            let z = Point::new(x, y);
            out.domination_checks += 2;
            out.domination_violations += u64::from(i1.value(z) > i2.value(z)) + u64::from(j2.value(z) > j1.value(z));
        }
    }
    Ok(out)
}

pub fn run(c: &BurkeConfig, threads: usize) -> LabResult<ExperimentReport> {
    c.validate()?;
    let samples = replicate(threads, c.seed, 0, c.reps, |s| one_replicate(s, c))?;
    let i: Vec<u64> = samples.iter().flat_map(|x| x.i.iter().copied()).collect();
    let j: Vec<u64> = samples.iter().flat_map(|x| x.j.iter().copied()).collect();
    let fi: Vec<f64> = i.iter().map(|&v| v as f64).collect();
    let fj: Vec<f64> = j.iter().map(|&v| v as f64).collect();
    let n = i.len();
    let bound = 4.0 / (n as f64).sqrt();

    let mut rep = ExperimentReport::new("burke", c)?;
    rep.estimates.push(Estimate::mean("mean_i", &[], mean_se(&fi)));
    rep.estimates.push(Estimate::mean("mean_j", &[], mean_se(&fj)));
    rep.diagnostic("expected_mean_i", c.p / (1.0 - c.p));
    rep.diagnostic("expected_mean_j", (c.r / c.p) / (1.0 - c.r / c.p));

    for (name, xs, rho) in [("i", &i, c.p), ("j", &j, c.r / c.p)] {
        let gate = format!("gof_{name}");
        match chi_square_geometric(xs, rho, MAX_BINS) {
            Tested::Done(t) => {
                rep.tests.push(TestStatistic {
                    name: gate.clone(),
                    statistic: t.statistic,
                    p_value: Some(t.p_value),
                    df: Some(t.df),
                });
                rep.gate(&gate, t.p_value >= SIGNIFICANCE, format!("p = {} vs Geom({rho})", t.p_value));
            }
            Tested::Inconclusive(why) => rep.inconclusive(&gate, why),
        }
    }

    let correlations = [
        ("lag1_i", lag_correlation(&fi, 1)),
        ("lag1_j", lag_correlation(&fj, 1)),
        ("cross_ij", cross_correlation(&fi, &fj)),
    ];
    for (name, rho) in correlations {
        match rho {
            Tested::Done(v) => {
                rep.tests.push(TestStatistic { name: name.into(), statistic: v, p_value: None, df: None });
                rep.gate(name, v.abs() <= bound, format!("|rho| = {} vs 4/sqrt(n) = {bound}", v.abs()));
            }
            Tested::Inconclusive(why) => rep.inconclusive(name, why),
        }
    }

    let rv: u64 = samples.iter().map(|x| x.recovery_violations).sum();
    let sites: u64 = samples.iter().map(|x| x.interior_sites).sum();
    rep.gate("recovery", rv == 0, format!("min(I,J) = omega failed at {rv} of {sites} sites"));
    let dv: u64 = samples.iter().map(|x| x.domination_violations).sum();
    let dc: u64 = samples.iter().map(|x| x.domination_checks).sum();
    rep.gate("coupled_domination", dv == 0, format!("{dv} order violations in {dc} comparisons"));
    Ok(rep)
}
