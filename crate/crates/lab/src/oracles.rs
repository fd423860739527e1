//! Exact reference computations that the Monte Carlo experiments are held
//! against.

use lpp_core::{Point, Weights};
use serde::Serialize;

use crate::error::{config_err, LabResult};

/// Largest truncation mass the walk oracle accepts.
pub const MAX_TRUNCATION_MASS: f64 = 1e-10;

/// Exact law of a lattice random walk with a finitely supported
/// (truncated, renormalised) step distribution.
#[derive(Clone, Debug, Serialize)]
pub struct WalkOracle {
    /// Step support is `[-t, t]`; `pmf[k]` is the probability of `k - t`.
    pub t: i64,
    pub pmf: Vec<f64>,
    pub truncation_mass: f64,
    pub n_max: usize,
    /// `stay[n] = P(S_1 <= 0, ..., S_n <= 0)`, with `stay[0] = 1`.
    pub stay: Vec<f64>,
    /// `nonpositive[n] = P(S_n <= 0)`, with `nonpositive[0] = 1`.
    pub nonpositive: Vec<f64>,
}

impl WalkOracle {
    /// Steps `X = G1 - G2` with independent `G1 ~ Geom(p1)`, `G2 ~ Geom(p2)`,
    /// truncated to the smallest symmetric window whose discarded mass is
    /// below [`MAX_TRUNCATION_MASS`].
    pub fn geometric_difference(p1: f64, p2: f64, n_max: usize) -> LabResult<Self> {
        if !(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0) {
            return config_err(format!("step parameters must lie in (0,1), got {p1}, {p2}"));
        }
        let c = (1.0 - p1) * (1.0 - p2) / (1.0 - p1 * p2);
        let outside = |t: i64| c * (p1.powi(t as i32 + 1) / (1.0 - p1) + p2.powi(t as i32 + 1) / (1.0 - p2));
        let mut t = 1;
        while outside(t) >= MAX_TRUNCATION_MASS {
            t += 1;
            if t > 100_000 {
                return config_err("step law too heavy-tailed for the oracle");
            }
        }
        let pmf: Vec<f64> = (-t..=t)
            .map(|d| if d >= 0 { c * p1.powi(d as i32) } else { c * p2.powi(-d as i32) })
            .collect();
        Self::from_pmf(t, pmf, n_max)
    }

    /// From weights on `[-t, t]`. The missing mass `1 - sum` is the
    /// truncation; the oracle refuses when it exceeds the threshold.
    pub fn from_pmf(t: i64, mut pmf: Vec<f64>, n_max: usize) -> LabResult<Self> {
        if pmf.len() as i64 != 2 * t + 1 || pmf.iter().any(|p| !(*p >= 0.0)) {
            return config_err("step pmf must be nonnegative on [-t, t]");
        }
        let total: f64 = pmf.iter().sum();
        let truncation_mass = 1.0 - total;
        if truncation_mass > MAX_TRUNCATION_MASS {
            return config_err(format!(
                "truncation mass {truncation_mass:e} exceeds {MAX_TRUNCATION_MASS:e}; widen the support"
            ));
        }
        for p in &mut pmf {
            *p /= total;
        }
        let mut o = WalkOracle { t, pmf, truncation_mass, n_max, stay: vec![], nonpositive: vec![] };
        o.stay = o.convolve(true);
        o.nonpositive = o.convolve(false);
        Ok(o)
    }

    /// Distributions of `S_n`, optionally killed on leaving `(-inf, 0]`;
    /// returns the surviving / nonpositive mass per `n`.
    fn convolve(&self, killed: bool) -> Vec<f64> {
        let t = self.t;
        // positions [-n_max t, n_max t]
        let reach = self.n_max as i64 * t;
        let width = (2 * reach + 1) as usize;
        let mut dist = vec![0.0; width];
        dist[reach as usize] = 1.0;
        let (mut lo, mut hi) = (reach, reach);
        let mut out = vec![1.0];
        for _ in 0..self.n_max {
            let mut next = vec![0.0; width];
            for x in lo..=hi {
                let m = dist[x as usize];
                if m == 0.0 {
                    continue;
                }
                for (k, p) in self.pmf.iter().enumerate() {
                    next[(x + k as i64 - t) as usize] += m * p;
                }
            }
            lo -= t;
            hi += t;
            if killed {
                for v in &mut next[(reach + 1) as usize..] {
                    *v = 0.0;
                }
                hi = hi.min(reach);
            }
            dist = next;
            out.push(dist[..=reach as usize].iter().sum());
        }
        out
    }

    /// `P(S_1 <= 0, ..., S_n <= 0)` from the Sparre–Andersen recursion
    /// `n g_n = sum_{k=1}^n P(S_k <= 0) g_{n-k}`.
    pub fn sparre_andersen(&self) -> Vec<f64> {
        let a = &self.nonpositive;
        let mut g = vec![1.0];
        for n in 1..=self.n_max {
            let s: f64 = (1..=n).map(|k| a[k] * g[n - k]).sum();
            g.push(s / n as f64);
        }
        g
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(k, p)| (k as i64 - self.t) as f64 * p).sum()
    }

    /// `P(X <= x)`.
    pub fn step_cdf(&self, x: i64) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .filter(|(k, _)| *k as i64 - self.t <= x)
            .map(|(_, p)| p)
            .sum()
    }
}

/// Exhaustive check of `∪_{u,v} U^{u,v}`: enumerates every up-right path
/// from each `u` and records, per target `v`, the best weight and whether
/// some maximiser steps from `0` to `e1`.
pub fn exhaustive_edge_event<W: Weights + ?Sized>(field: &W, sources: &[Point], targets: &[Point]) -> bool {
    let (lo, hi) = (field.lo(), field.hi());
    let width = (hi.x - lo.x + 1) as usize;
    let cell = |z: Point| (z.y - lo.y) as usize * width + (z.x - lo.x) as usize;
    let mut slot = vec![usize::MAX; width * (hi.y - lo.y + 1) as usize];
    for (i, &v) in targets.iter().enumerate() {
        slot[cell(v)] = i;
    }
    let top = targets.iter().fold(Point::new(i64::MIN, i64::MIN), |m, v| Point::new(m.x.max(v.x), m.y.max(v.y)));
    let walk = Walk { field, top, slot: &slot, lo, width };
    for &u in sources {
        let mut best: Vec<Option<(i64, bool)>> = vec![None; targets.len()];
        walk.dfs(u, i64::from(field.weight(u)), false, &mut best);
        if best.iter().any(|b| matches!(b, Some((_, true)))) {
            return true;
        }
    }
    false
}

struct Walk<'a, W: ?Sized> {
    field: &'a W,
    top: Point,
    slot: &'a [usize],
    lo: Point,
    width: usize,
}

impl<W: Weights + ?Sized> Walk<'_, W> {
    fn dfs(&self, z: Point, weight: i64, used: bool, best: &mut [Option<(i64, bool)>]) {
        let i = self.slot[(z.y - self.lo.y) as usize * self.width + (z.x - self.lo.x) as usize];
        if i != usize::MAX {
            best[i] = match best[i] {
                Some((w, _)) if w > weight => best[i],
                Some((w, u)) if w == weight => Some((w, u || used)),
                _ => Some((weight, used)),
            };
        }
        for step in [Point::E1, Point::E2] {
            let next = z + step;
            if next.le(self.top) && self.field.contains(next) {
                let crosses = z == Point::ORIGIN && step == Point::E1;
                self.dfs(next, weight + i64::from(self.field.weight(next)), used || crosses, best);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_step_is_the_step_cdf() {
        let o = WalkOracle::geometric_difference(0.5, 0.5, 5).unwrap();
        assert!(o.truncation_mass < MAX_TRUNCATION_MASS);
        assert!((o.stay[1] - o.step_cdf(0)).abs() < 1e-15);
        // symmetric difference of Geom(1/2): P(X <= 0) = 1/2 + P(X = 0)/2 = 2/3,
        // up to the renormalised truncation mass
        assert!((o.stay[1] - 2.0 / 3.0).abs() <= o.truncation_mass);
        assert!(o.mean().abs() < 1e-12);
    }

    #[test]
    fn two_point_walk_by_hand() {
        // steps ±1 with probability 1/2: P(S1<=0, S2<=0) = 1/2
        let o = WalkOracle::from_pmf(1, vec![0.5, 0.0, 0.5], 4).unwrap();
        assert_eq!(o.stay[1], 0.5);
        assert_eq!(o.stay[2], 0.5);
        assert_eq!(o.stay[3], 0.375);
        let sa = o.sparre_andersen();
        for n in 0..=4 {
            assert!((sa[n] - o.stay[n]).abs() < 1e-15);
        }
    }

    #[test]
    fn refuses_heavy_truncation() {
        assert!(WalkOracle::from_pmf(1, vec![0.3, 0.3, 0.3], 3).is_err());
    }
}
