//! Boundary random walk built from two independent stationary columns: both
//! half-lines staying nonpositive.

use lpp_core::analytics::xibar;
use lpp_core::engine::IndexedColumn;
use lpp_core::queueing::{boundary_walk_drift, build_boundary_walk};
use lpp_core::{sample_geometric, GeomParam, RngStream};
use serde::Serialize;

use super::{check_p, check_r, check_reps, non_increasing_within};
use crate::config::Settings;
use crate::error::{config_err, LabResult};
use crate::parallel::replicate;
use crate::report::{Estimate, ExperimentReport};
use crate::stats::{loglog_fit, Tested};

/// Exponent used for the direction window `N^{-a0/2}`.
pub const A0: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RwBoundaryConfig {
    pub r: f64,
    /// Parameter of the `ξ` column.
    pub p: f64,
    /// Parameter of the `η` column.
    pub q: f64,
    /// Half-lengths `K`; the matching scale is `N = K^{3/2}`.
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

impl Default for RwBoundaryConfig {
    fn default() -> Self {
        RwBoundaryConfig { r: 0.25, p: 0.5, q: 0.5, sizes: vec![1, 4, 16, 64], reps: 10_000, seed: 5 }
    }
}

impl RwBoundaryConfig {
    pub fn from_settings(s: &Settings) -> LabResult<Self> {
        let d = Self::default();
        let r = s.require_f64("r")?;
        let p = s.require_f64("p")?;
        let c = RwBoundaryConfig {
            r,
            p,
            q: s.f64_or("q", p)?,
            sizes: s.usize_list("size")?.unwrap_or(d.sizes),
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
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return config_err("sizes must be a nonempty list of positive half-lengths");
        }
        let k = *self.sizes.iter().max().expect("nonempty");
        let n = (k as f64).powf(1.5);
        let gap = xibar(self.p, self.r)?.0 - xibar(self.q, self.r)?.0;
        let width = n.powf(-A0 / 2.0);
        if !(gap <= 0.0 && gap >= -width) {
            return config_err(format!(
                "direction separation {gap} outside [-N^(-a0/2), 0] = [{}, 0] at N = {n}",
                -width
            ));
        }
        Ok(())
    }
}

/// Per size: (positive half stays nonpositive, negative half stays nonpositive).
pub fn sample_halves(st: &mut RngStream, c: &RwBoundaryConfig) -> LabResult<Vec<(bool, bool)>> {
    let k = *c.sizes.iter().max().expect("validated") as i64;
    let gx = GeomParam::new(c.r / c.p)?;
    let ge = GeomParam::new(c.r / c.q)?;
    let len = 2 * k as usize;
    let jx: Vec<i64> = (0..len).map(|_| sample_geometric(st, gx) as i64).collect();
    let je: Vec<i64> = (0..len).map(|_| sample_geometric(st, ge) as i64).collect();
    let full_x = IndexedColumn { start: -k + 1, values: jx };
    let full_e = IndexedColumn { start: -k + 1, values: je };
    c.sizes
        .iter()
        .map(|&kk| {
            let kk = kk as i64;
            let cut = |col: &IndexedColumn| IndexedColumn {
                start: -kk + 1,
                values: (-kk + 1..=kk).map(|j| col.get(j).expect("inside the sampled window")).collect(),
            };
            let w = build_boundary_walk(&cut(&full_x), &cut(&full_e), kk as usize)?;
            Ok((w.positive_half_nonpositive(), w.negative_half_nonpositive()))
        })
        .collect()
}

pub fn run(c: &RwBoundaryConfig, threads: usize) -> LabResult<ExperimentReport> {
    c.validate()?;
    let halves = replicate(threads, c.seed, 0, c.reps, |st| sample_halves(st, c))?;
    let reps = c.reps as u64;
    let mut rep = ExperimentReport::new("rw-boundary", c)?;
    rep.diagnostic("drift", boundary_walk_drift(c.r, c.p, c.q));

    let mut joint = Vec::new();
    let mut positive = Vec::new();
    let mut product_ok = true;
    for (i, &k) in c.sizes.iter().enumerate() {
        let kp = halves.iter().filter(|h| h[i].0).count() as u64;
        let kn = halves.iter().filter(|h| h[i].1).count() as u64;
        let kj = halves.iter().filter(|h| h[i].0 && h[i].1).count() as u64;
        let params = [("k", k as f64)];
        let ej = Estimate::probability("both_halves", &params, kj, reps);
        let ep = Estimate::probability("positive_half", &params, kp, reps);
        let en = Estimate::probability("negative_half", &params, kn, reps);
        let prod = ep.estimate * en.estimate;
        let prod_se = (en.estimate.powi(2) * ep.se.powi(2) + ep.estimate.powi(2) * en.se.powi(2)).sqrt();
        let tol = 3.0 * (ej.se.powi(2) + prod_se.powi(2)).sqrt();
        product_ok &= (ej.estimate - prod).abs() <= tol;
        rep.estimates.push(Estimate {
            quantity: "product_of_halves".into(),
            params: params.iter().map(|(a, b)| (a.to_string(), *b)).collect(),
            estimate: prod,
            se: prod_se,
            n: c.reps,
            interval: None,
        });
        joint.push(ej.estimate);
        positive.push(ep.estimate);
        rep.estimates.extend([ej, ep, en]);
    }
    rep.gate("product_form_within_3se", product_ok, "joint vs product of the two half-line estimates");
    let mut order: Vec<usize> = (0..c.sizes.len()).collect();
    order.sort_by_key(|&i| c.sizes[i]);
    let sorted: Vec<f64> = order.iter().map(|&i| joint[i]).collect();
    rep.gate("non_increasing_in_k", non_increasing_within(&sorted, |_| 0.0), format!("{sorted:?}"));

    let ns: Vec<f64> = order.iter().map(|&i| (c.sizes[i] as f64).powf(1.5)).collect();
    let ph: Vec<f64> = order.iter().map(|&i| positive[i]).collect();
    if let Tested::Done(f) = loglog_fit(&ns, &ph) {
        rep.diagnostic("half_line_exponent_in_n", f.slope);
        rep.diagnostic("fitted_a0", -2.0 * f.slope);
    }
    Ok(rep)
}
