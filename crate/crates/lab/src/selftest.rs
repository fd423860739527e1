//! Deterministic identity suite and closed-form anchors behind `lpp-lab selftest`.

use std::fmt::Write as _;

use lpp_core::analytics::*;
use lpp_core::engine::*;
use lpp_core::lattice::Axis;
use lpp_core::queueing::*;
use lpp_core::{sample_geometric, sample_weight_field, GeomParam, Point, RngStream, Weights};

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    /// Random instances per identity family.
    pub instances: usize,
    /// Random draws per closed-form predicate.
    pub draws: usize,
    pub seed: u64,
    /// Mutation hook: trace the "rightmost" geodesic with the upmost tie rule
    /// and vice versa.
    pub swap_tie_rule: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { instances: 1000, draws: 10_000, seed: 2024, swap_tie_rule: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult { name, cases: 0, failures: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect()
    }

    /// One line per invariant; no timings, so the text is reproducible.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if c.passed() {
                let _ = writeln!(out, "PASS {} ({} cases)", c.name, c.cases);
            } else {
                let _ = writeln!(
                    out,
                    "FAIL {} ({} of {} cases): {}",
                    c.name,
                    c.failures,
                    c.cases,
                    c.first_failure.as_deref().unwrap_or("no cases ran")
                );
            }
        }
        out
    }
}

pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    let mut checks = identity_suite(opts);
    checks.extend(closed_form_suite(opts));
    SelftestReport { checks }
}

fn uniform(s: &mut RngStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * s.next_open01()
}

fn below(s: &mut RngStream, lo: u64, hi: u64) -> u64 {
    lo + s.next_u64() % (hi - lo)
}

fn geom_vec(s: &mut RngStream, rho: f64, n: usize) -> Vec<i64> {
    let g = GeomParam::new(rho).expect("valid parameter");
    (0..n).map(|_| sample_geometric(s, g) as i64).collect()
}

fn points(lo: Point, hi: Point) -> impl Iterator<Item = Point> {
    (lo.y..=hi.y).flat_map(move |y| (lo.x..=hi.x).map(move |x| Point::new(x, y)))
}

/// Exact lattice and queueing identities on random instances with grids up to 32x32.
pub fn identity_suite(opts: &SelftestOptions) -> Vec<CheckResult> {
    let mut recovery = CheckResult::new("recovery min(I,J) = omega");
    let mut cocycle = CheckResult::new("increment cocycle");
    let mut push = CheckResult::new("push-forward additivity");
    let mut superadd = CheckResult::new("superadditivity rearrangement");
    let mut shift = CheckResult::new("exit-shift");
    let mut ordering = CheckResult::new("geodesic ordering");
    let mut qcocycle = CheckResult::new("queue cocycle");
    let mut dominate = CheckResult::new("departures dominate services");
    let mut conserve = CheckResult::new("queue conservation");
    let mut interchange = CheckResult::new("interchange on stabilized windows");
    let mut lindley_dp = CheckResult::new("Lindley equals DP increments");

    let (rightmost, upmost) = if opts.swap_tie_rule {
        (TieRule::Upmost, TieRule::Rightmost)
    } else {
        (TieRule::Rightmost, TieRule::Upmost)
    };

    for inst in 0..opts.instances as u64 {
        let s = &mut RngStream::new(opts.seed, inst);
        let w = below(s, 2, 33) as usize;
        let h = below(s, 2, 33) as usize;
        let r = uniform(s, 0.05, 0.9);
        let f = sample_weight_field(s, Point::ORIGIN, w, h, r).expect("valid field");
        let (lo, hi) = (f.lo(), f.hi());

        // bulk increments
        let g = bulk_passage_forward(&f, lo).expect("anchor inside");
        let ti = increment_fields(&g, Axis::E1);
        let tj = increment_fields(&g, Axis::E2);
        for p in points(lo + Point::new(1, 1), hi) {
            let ok = ti.value(p).min(tj.value(p)) == i64::from(f.weight(p));
            recovery.check(ok, || format!("instance {inst} at {p}"));
        }
        for p in points(lo, hi - Point::new(1, 1)) {
            let (e1, e2, e12) = (p + Point::E1, p + Point::E2, p + Point::new(1, 1));
            let ok = ti.value(e1) + tj.value(e12) == tj.value(e2) + ti.value(e12);
            cocycle.check(ok, || format!("instance {inst} at {p}"));
        }

        // push-forward and superadditivity through an interior corner
        let y = Point::new(below(s, 0, w as u64 - 1) as i64, below(s, 0, h as u64 - 1) as i64);
        let d = hi - y;
        let b = push_forward_boundary(&g, y, d.x as usize, d.y as usize).expect("corner inside");
        let gy = bulk_passage_forward(&f, y).expect("anchor inside");
        let wy = i64::from(f.weight(y));
        let sw = sw_boundary_passage(&f, &b).expect("rectangle inside");
        let ok = points(y, hi).all(|z| g.value(z) == g.value(y) + sw.value(z));
        push.check(ok, || format!("instance {inst} corner {y}"));
        let ok = points(y, hi).all(|z| g.value(y) + gy.value(z) - wy <= g.value(z));
        superadd.check(ok, || format!("instance {inst} corner {y}"));

        // geodesics to the far corner: both extremal ones attain G, are
        // ordered, and the superadditivity bound is tight on their vertices
        let rev = bulk_passage_reverse(&f, hi).expect("anchor inside");
        let gr = trace_geodesic(&rev, lo, hi, rightmost).expect("valid endpoints");
        let gu = trace_geodesic(&rev, lo, hi, upmost).expect("valid endpoints");
        let total = g.value(hi);
        let ok = gr.weight_with(|p| f.weight(p)) == total
            && gu.weight_with(|p| f.weight(p)) == total
            && gr.weakly_right_of(&gu);
        ordering.check(ok, || format!("instance {inst}: rightmost geodesic is not weakly right of the upmost one"));
        let ok = gr.vertices.iter().all(|&v| g.value(v) + rev.value(v) - i64::from(f.weight(v)) == total);
        superadd.check(ok, || format!("instance {inst}: equality fails on the geodesic"));

        // exit shift in a stationary model
        let n = w.min(h) - 1;
        let c = lo;
        let p = uniform(s, r + 0.02, 0.98).max(r + 0.01);
        let sb = sample_stationary_boundary(s, c, n, n, r, p).expect("valid boundary");
        let sg = sw_boundary_passage(&f, &sb).expect("rectangle inside");
        let shi = sg.hi();
        let table = ExitTable::from_grid(&sg).expect("boundary grid");
        let l = below(s, 1, n as u64 + 1) as i64;
        for (axis, step) in [(Axis::E1, Point::new(l, 0)), (Axis::E2, Point::new(0, l))] {
            let corner = c + step;
            let dd = shi - corner;
            if dd.x < 1 || dd.y < 1 {
                continue;
            }
            let nb = push_forward_boundary(&sg, corner, dd.x as usize, dd.y as usize).expect("corner inside");
            let ng = sw_boundary_passage(&f, &nb).expect("rectangle inside");
            let nt = ExitTable::from_grid(&ng).expect("boundary grid");
            for t in points(corner + Point::new(1, 1), shi) {
                let (o1, o2) = table.get(t).expect("interior target");
                let (n1, n2) = nt.get(t).expect("interior target");
                let ok = match axis {
                    Axis::E1 => (o1 > l) == (n1 >= 1) && (o1 <= l || n1 == o1 - l) && (o2 > l) == (n2 >= 1) && (o2 <= l || n2 == o2 - l),
                    Axis::E2 => (o1 < -l) == (n1 <= -1) && (o1 >= -l || n1 == o1 + l) && (o2 < -l) == (n2 <= -1) && (o2 >= -l || n2 == o2 + l),
                };
                shift.check(ok, || format!("instance {inst} shift {step} target {t}: ({o1},{o2}) -> ({n1},{n2})"));
            }
        }

        // Lindley recursion reproduces the boundary model's increments
        let (m, nn) = (w - 1, h - 1);
        let lb = sample_stationary_boundary(s, lo, m, nn, r, p).expect("valid boundary");
        let lg = sw_boundary_passage(&f, &lb).expect("rectangle inside");
        let li = increment_fields(&lg, Axis::E1);
        let lj = increment_fields(&lg, Axis::E2);
        let mut col = lb.j_col.clone();
        let mut ok = true;
        for k in 1..=m as i64 {
            let bulk: Vec<i64> = (1..=nn as i64).map(|l| i64::from(f.weight(lo + Point::new(k, l)))).collect();
            let (next, soj) = propagate_boundary(&col, &bulk, lb.i_row[k as usize - 1]).expect("equal lengths");
            for l in 1..=nn as i64 {
                let z = lo + Point::new(k, l);
                ok &= next[l as usize - 1] == lj.value(z) && soj[l as usize - 1] == li.value(z);
            }
            col = next;
        }
        lindley_dp.check(ok, || format!("instance {inst}"));

        // single queue
        let len = below(s, 1, 200) as usize;
        let a = geom_vec(s, 0.6, len);
        let sv = geom_vec(s, 0.4, len);
        let t0 = below(s, 0, 20) as i64;
        let q = lindley(&a, &sv, t0).expect("valid queue");
        let mut prev = t0;
        let mut ok_c = true;
        let mut ok_d = true;
        for j in 0..len {
            ok_c &= q.sojourns[j] + a[j] == prev + q.departures[j];
            ok_d &= q.departures[j] >= sv[j];
            prev = q.sojourns[j];
        }
        qcocycle.check(ok_c, || format!("instance {inst}"));
        dominate.check(ok_d, || format!("instance {inst}"));
        let sd: i64 = q.departures.iter().sum();
        let sa: i64 = a.iter().sum();
        conserve.check(sd == sa + q.t_last() - t0, || format!("instance {inst}: {sd} vs {sa} + {} - {t0}", q.t_last()));

        // five-queue interchange
        let len = 2000;
        let bb = geom_vec(s, 0.7, len);
        let aa = geom_vec(s, 0.5, len);
        let ss = geom_vec(s, 0.3, len);
        let empty = queue_identity_sides(&bb, &aa, &ss, InterchangeInits::default()).expect("equal lengths");
        interchange.check(empty.lhs == empty.rhs, || format!("instance {inst}: empty start"));
        let high = bb.iter().chain(&aa).chain(&ss).sum::<i64>() + 1;
        let verdict = check_interchange(&bb, &aa, &ss, 250, high).expect("equal lengths");
        let ok = !matches!(verdict, InterchangeVerdict::Fails { .. });
        interchange.check(ok, || format!("instance {inst}: {verdict:?}"));
    }
    vec![recovery, cocycle, push, superadd, shift, ordering, qcocycle, dominate, conserve, interchange, lindley_dp]
}

/// Golden-section minimisation of `p ↦ M^p(x)`, seeded by a dense grid.
pub fn numeric_min_m(x: (f64, f64), r: f64) -> f64 {
    let n = 20_000;
    let f = |p: f64| stationary_m(p, x, r).expect("p in (r,1)");
    let h = (1.0 - r) / n as f64;
    let (mut best, mut arg) = (f64::INFINITY, 1);
    for i in 1..n {
        let v = f(r + h * i as f64);
        if v < best {
            best = v;
            arg = i;
        }
    }
    let (mut a, mut b) = (r + h * (arg - 1).max(1) as f64, r + h * (arg + 1).min(n - 1) as f64);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.min(f(0.5 * (a + b)))
}

/// Closed-form round trips, the variational formula, the tilt balance and
/// the calculus bounds on random draws from their domains.
pub fn closed_form_suite(opts: &SelftestOptions) -> Vec<CheckResult> {
    let s = &mut RngStream::new(opts.seed, u64::MAX);
    let mut trips = CheckResult::new("pbar/xibar round trips");
    for i in 1..40 {
        let r = i as f64 / 40.0;
        for j in 1..27 {
            let t = 0.02 + 0.96 * j as f64 / 27.0;
            let p = pbar((t, 1.0 - t), r).expect("valid direction");
            let (a, b) = xibar(p, r).expect("valid parameter");
            trips.check((a - t).abs() <= 1e-12 && (a + b - 1.0).abs() <= 1e-12, || format!("r={r} t={t}"));
            let q = r + (1.0 - r) * j as f64 / 27.5;
            let back = pbar(xibar(q, r).expect("valid parameter"), r).expect("valid direction");
            trips.check((back - q).abs() <= 1e-12, || format!("r={r} q={q}"));
        }
    }

    let mut variational = CheckResult::new("variational formula min M = gamma");
    for _ in 0..200 {
        let r = uniform(s, 0.05, 0.9);
        let x = (uniform(s, 0.05, 3.0), uniform(s, 0.05, 3.0));
        let g = shape_gamma(x, r).expect("valid point");
        variational.check((numeric_min_m(x, r) - g).abs() <= 1e-8, || format!("r={r} x={x:?}"));
    }

    let mut balance = CheckResult::new("tilt balance");
    for _ in 0..opts.draws {
        let r = uniform(s, 0.05, 0.9);
        let (a, b) = (uniform(s, 0.01, 5.0), uniform(s, 0.01, 5.0));
        let lambda = uniform(s, 1.0, 1.0 / r);
        let pm = pbar_minus_lambda(a, b, lambda, r).expect("in domain");
        let pp = pbar_plus_lambda(a, b, lambda, r).expect("in domain");
        // within 1e-6 of either end the double rounding of the root alone
        // moves M by more than the tolerance
        if pm > r + 1e-6 && pp < 1.0 - 1e-6 {
            let lo = stationary_m(pm, (a, b), r).expect("in domain");
            let hi = stationary_m(pp, (a, b), r).expect("in domain");
            balance.check((lo - hi).abs() <= 1e-9 * lo.max(1.0), || format!("a={a} b={b} lambda={lambda} r={r}"));
        }
    }

    let mut gap = CheckResult::new("tilt gap lower bound");
    let mut lip = CheckResult::new("pbar Lipschitz in direction");
    let mut xlip = CheckResult::new("xibar Lipschitz in parameter");
    let mut linear = CheckResult::new("shape linear bounds");
    let mut cone = CheckResult::new("pbar cone bounds");
    let mut taylor = CheckResult::new("tilt Taylor remainder");
    for _ in 0..opts.draws {
        let r = uniform(s, 0.05, 0.95);
        let x = (uniform(s, 0.0, 10.0), uniform(s, 0.0, 10.0));
        linear.check(shape_linear_bounds_hold(x, r).unwrap_or(false), || format!("x={x:?} r={r}"));

        let delta = uniform(s, 0.01, 0.99);
        let cp = ConeParams::new(delta).expect("delta in (0,1)");
        let lo_t = delta / (1.0 + delta);
        let scale = uniform(s, 0.1, 10.0);
        let (t, u) = (uniform(s, lo_t, 1.0 - lo_t), uniform(s, lo_t, 1.0 - lo_t));
        let (xi, zeta) = ((scale * t, scale * (1.0 - t)), (u, 1.0 - u));
        if cp.contains(xi) && cp.contains(zeta) {
            cone.check(pbar_cone_bounds_hold(xi, delta, r).unwrap_or(false), || format!("xi={xi:?} delta={delta} r={r}"));
            lip.check(pbar_lipschitz_holds(xi, zeta, delta, r).unwrap_or(false), || format!("xi={xi:?} zeta={zeta:?} delta={delta} r={r}"));
        }

        let q = uniform(s, r + 1e-6, 1.0 - 1e-6);
        let xq = (x.0 + 1e-3, x.1 + 1e-3);
        xlip.check(xibar_lipschitz_holds(xq, q, r).unwrap_or(false), || format!("x={xq:?} q={q} r={r}"));

        let d0 = uniform(s, 0.001, r * 0.999);
        let t0 = uniform(s, d0 / (1.0 + d0), 1.0 / (1.0 + d0));
        let lambda = uniform(s, 1.0, 1.0 / r);
        let ab = (scale * t0, scale * (1.0 - t0));
        if ConeParams::new(d0).expect("delta in (0,1)").contains(ab) {
            gap.check(tilt_gap_bound_holds(ab.0, ab.1, lambda, d0, r).unwrap_or(false), || format!("ab={ab:?} lambda={lambda} delta={d0} r={r}"));
        }

        // the cubic bound needs λ's - r >= ε along all of [1, λ], i.e. s - r >= ε
        let sv = uniform(s, r, 0.999);
        let eps = uniform(s, 0.0, r.min(1.0 - sv).min((1.0 - r) / 2.0).min(sv - r));
        let top = (1.0 - eps) / sv;
        if eps > 0.0 && top >= 1.0 {
            let l = uniform(s, 1.0, top);
            let (a, b) = (xq.0, xq.1);
            taylor.check(tilt_taylor_bound_holds(a, b, sv, l, eps, r).unwrap_or(false), || format!("a={a} b={b} s={sv} eps={eps} lambda={l} r={r}"));
        }
    }
    vec![trips, variational, balance, gap, lip, xlip, linear, cone, taylor]
}
