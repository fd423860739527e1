//! Single-server queue algebra on integer sequences and the queue
//! constructions behind coupled stationary boundaries.
//!
//! A queue is fed inter-arrival times `a` and service times `s`; on a finite
//! window the state before customer 1 is summarised by the sojourn `t_init`
//! of customer 0. With `t_init` drawn from its stationary law the window is
//! exactly stationary.

use crate::engine::IndexedColumn;
use crate::error::{param, LppError, Result};
use crate::rng::RngStream;
use crate::sampling::{sample_geometric, GeomParam};

/// Output of the Lindley recursion
/// `t_j = (t_{j-1} - a_j)^+ + s_j`, `d_j = t_j + a_j - t_{j-1}`,
/// `š_j = min(a_j, t_{j-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueueTrace {
    pub arrivals: Vec<i64>,
    pub services: Vec<i64>,
    pub t_init: i64,
    pub sojourns: Vec<i64>,
    pub departures: Vec<i64>,
    pub dual_services: Vec<i64>,
}

impl QueueTrace {
    pub fn t_last(&self) -> i64 {
        self.sojourns.last().copied().unwrap_or(self.t_init)
    }
}

pub fn lindley(a: &[i64], s: &[i64], t_init: i64) -> Result<QueueTrace> {
    if a.len() != s.len() {
        return param(format!("arrivals ({}) and services ({}) differ in length", a.len(), s.len()));
    }
    if t_init < 0 || a.iter().chain(s).any(|&x| x < 0) {
        return param("queue inputs must be nonnegative");
    }
    let n = a.len();
    let mut sojourns = Vec::with_capacity(n);
    let mut departures = Vec::with_capacity(n);
    let mut dual_services = Vec::with_capacity(n);
    let mut prev = t_init;
    for j in 0..n {
        let t = (prev - a[j]).max(0) + s[j];
        sojourns.push(t);
        departures.push(t + a[j] - prev);
        dual_services.push(a[j].min(prev));
        prev = t;
    }
    Ok(QueueTrace {
        arrivals: a.to_vec(),
        services: s.to_vec(),
        t_init,
        sojourns,
        departures,
        dual_services,
    })
}

/// Inter-departure times `D(a, s)`.
pub fn departures(a: &[i64], s: &[i64], t_init: i64) -> Result<Vec<i64>> {
    Ok(lindley(a, s, t_init)?.departures)
}

/// Sojourn times `S(a, s)`.
pub fn sojourns(a: &[i64], s: &[i64], t_init: i64) -> Result<Vec<i64>> {
    Ok(lindley(a, s, t_init)?.sojourns)
}

/// Dual service times `R(a, s)`.
pub fn dual_services(a: &[i64], s: &[i64], t_init: i64) -> Result<Vec<i64>> {
    Ok(lindley(a, s, t_init)?.dual_services)
}

/// Stationary sojourn of a queue with `Geom(sigma)` services and
/// `Geom(alpha)` inter-arrivals: a `Geom(sigma/alpha)` draw.
pub fn stationary_sojourn_init(stream: &mut RngStream, sigma: f64, alpha: f64) -> Result<i64> {
    if !(sigma >= 0.0 && alpha > 0.0 && alpha < 1.0) {
        return param(format!("need 0 <= sigma and 0 < alpha < 1, got sigma={sigma}, alpha={alpha}"));
    }
    if sigma >= alpha {
        return Err(LppError::Instability(format!(
            "service parameter {sigma} is not below arrival parameter {alpha}"
        )));
    }
    Ok(sample_geometric(stream, GeomParam::new(sigma / alpha)?) as i64)
}

/// Initial sojourns for the five queues of the interchange identity:
/// `(b,a)`, `(D(b,a),s)`, `(a,s)`, `(b,R(a,s))` and `(D(b,R(a,s)),D(a,s))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct InterchangeInits {
    pub ba: i64,
    pub lhs: i64,
    pub a_s: i64,
    pub b_dual: i64,
    pub rhs: i64,
}

impl InterchangeInits {
    pub fn uniform(t: i64) -> Self {
        InterchangeInits {
            ba: t,
            lhs: t,
            a_s: t,
            b_dual: t,
            rhs: t,
        }
    }
}

/// Every sequence produced while evaluating both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterchangeSides {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    traces: [QueueTrace; 5],
}

impl InterchangeSides {
    fn agree_from(&self, other: &InterchangeSides) -> Option<usize> {
        // first index from which every sojourn and departure sequence agrees
        let n = self.lhs.len();
        let mut start = 0;
        for (x, y) in self.traces.iter().zip(&other.traces) {
            let mut k = n;
            while k > 0 && x.sojourns[k - 1] == y.sojourns[k - 1] && x.departures[k - 1] == y.departures[k - 1] {
                k -= 1;
            }
            start = start.max(k);
        }
        (start < n).then_some(start)
    }
}

/// Both sides of `D(D(b,a),s) = D(D(b,R(a,s)),D(a,s))` on a finite window.
pub fn queue_identity_sides(b: &[i64], a: &[i64], s: &[i64], inits: InterchangeInits) -> Result<InterchangeSides> {
    let q_ba = lindley(b, a, inits.ba)?;
    let q_lhs = lindley(&q_ba.departures, s, inits.lhs)?;
    let q_as = lindley(a, s, inits.a_s)?;
    let q_bd = lindley(b, &q_as.dual_services, inits.b_dual)?;
    let q_rhs = lindley(&q_bd.departures, &q_as.departures, inits.rhs)?;
    Ok(InterchangeSides {
        lhs: q_lhs.departures.clone(),
        rhs: q_rhs.departures.clone(),
        traces: [q_ba, q_lhs, q_as, q_bd, q_rhs],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterchangeVerdict {
    /// Sides agree on `[from, len)`, the part of the window where the
    /// initial state has been forgotten.
    Holds { from: usize, window: usize },
    Fails { index: usize, lhs: i64, rhs: i64 },
    /// The window never forgot its initial state.
    Inconclusive { window: usize },
}

/// Checks the interchange identity on the part of the window that no longer
/// depends on the initial sojourns. Two chains are run, one started from
/// empty queues and one from sojourn `high` everywhere; once every
/// intermediate sequence coincides the initial state is irrelevant. The
/// window (a prefix of the inputs) starts at `initial_window` and doubles
/// until coalescence or until the full input is used.
pub fn check_interchange(b: &[i64], a: &[i64], s: &[i64], initial_window: usize, high: i64) -> Result<InterchangeVerdict> {
    let cap = b.len();
    if a.len() != cap || s.len() != cap || cap == 0 {
        return param("interchange inputs must be nonempty and of equal length");
    }
    let mut window = initial_window.clamp(1, cap);
    loop {
        let lo = queue_identity_sides(&b[..window], &a[..window], &s[..window], InterchangeInits::default())?;
        let hi = queue_identity_sides(&b[..window], &a[..window], &s[..window], InterchangeInits::uniform(high))?;
        if let Some(from) = lo.agree_from(&hi) {
            for j in from..window {
                if lo.lhs[j] != lo.rhs[j] {
                    return Ok(InterchangeVerdict::Fails {
                        index: j,
                        lhs: lo.lhs[j],
                        rhs: lo.rhs[j],
                    });
                }
            }
            return Ok(InterchangeVerdict::Holds { from, window });
        }
        if window == cap {
            return Ok(InterchangeVerdict::Inconclusive { window });
        }
        window = (2 * window).min(cap);
    }
}

/// `(I', J', ω') = (ω + (I-J)^+, ω + (J-I)^+, min(I, J))`.
pub fn geometric_triple_map(i: i64, j: i64, omega: i64) -> (i64, i64, i64) {
    (omega + (i - j).max(0), omega + (j - i).max(0), i.min(j))
}

/// Two coupled vertical boundary columns for parameters `q1 <= q2`.
///
/// The `Geom(r/q2)` column serves as the service sequence of a queue fed by
/// independent `Geom(r/q1)` inter-arrivals; its departures form the
/// `Geom(r/q1)` column. Hence `j_q2 <= j_q1` pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledJPair {
    pub j_q1: Vec<i64>,
    pub j_q2: Vec<i64>,
}

impl CoupledJPair {
    pub fn dominated(&self) -> bool {
        self.j_q2.iter().zip(&self.j_q1).all(|(lo, hi)| lo <= hi)
    }
}

pub fn sample_coupled_j_pair(stream: &mut RngStream, r: f64, q1: f64, q2: f64, length: usize) -> Result<CoupledJPair> {
    if !(0.0 < r && r < q1 && q1 <= q2 && q2 < 1.0) {
        return param(format!("need 0 < r < q1 <= q2 < 1, got r={r}, q1={q1}, q2={q2}"));
    }
    let base = GeomParam::new(r / q2)?;
    let j_q2: Vec<i64> = (0..length).map(|_| sample_geometric(stream, base) as i64).collect();
    if q1 == q2 {
        return Ok(CoupledJPair { j_q1: j_q2.clone(), j_q2 });
    }
    let arr = GeomParam::new(r / q1)?;
    let arrivals: Vec<i64> = (0..length).map(|_| sample_geometric(stream, arr) as i64).collect();
    let t0 = stationary_sojourn_init(stream, r / q2, r / q1)?;
    let j_q1 = departures(&arrivals, &j_q2, t0)?;
    Ok(CoupledJPair { j_q1, j_q2 })
}

/// Coupled horizontal rows for `q1 <= q2`: the `Geom(q1)` row is the service
/// sequence, `Geom(q2)` inter-arrivals feed the queue and the departures form
/// the `Geom(q2)` row, so `i_q1 <= i_q2` pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledIPair {
    pub i_q1: Vec<i64>,
    pub i_q2: Vec<i64>,
}

pub fn sample_coupled_i_pair(stream: &mut RngStream, r: f64, q1: f64, q2: f64, length: usize) -> Result<CoupledIPair> {
    if !(0.0 < r && r < q1 && q1 <= q2 && q2 < 1.0) {
        return param(format!("need 0 < r < q1 <= q2 < 1, got r={r}, q1={q1}, q2={q2}"));
    }
    let base = GeomParam::new(q1)?;
    let i_q1: Vec<i64> = (0..length).map(|_| sample_geometric(stream, base) as i64).collect();
    if q1 == q2 {
        return Ok(CoupledIPair { i_q2: i_q1.clone(), i_q1 });
    }
    let arr = GeomParam::new(q2)?;
    let arrivals: Vec<i64> = (0..length).map(|_| sample_geometric(stream, arr) as i64).collect();
    let t0 = stationary_sojourn_init(stream, q1, q2)?;
    let i_q2 = departures(&arrivals, &i_q1, t0)?;
    Ok(CoupledIPair { i_q1, i_q2 })
}

/// Coupled pair of southwest boundaries for `q1 <= q2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledBoundary {
    pub r: f64,
    pub q1: f64,
    pub q2: f64,
    pub i1: Vec<i64>,
    pub i2: Vec<i64>,
    pub j1: Vec<i64>,
    pub j2: Vec<i64>,
    /// `i1 <= i2` and `j2 <= j1` at every index.
    pub ordered: bool,
}

pub fn sample_coupled_boundary(stream: &mut RngStream, r: f64, q1: f64, q2: f64, m: usize, n: usize) -> Result<CoupledBoundary> {
    let ip = sample_coupled_i_pair(stream, r, q1, q2, m)?;
    let jp = sample_coupled_j_pair(stream, r, q1, q2, n)?;
    let ordered = ip.i_q1.iter().zip(&ip.i_q2).all(|(a, b)| a <= b) && jp.dominated();
    Ok(CoupledBoundary {
        r,
        q1,
        q2,
        i1: ip.i_q1,
        i2: ip.i_q2,
        j1: jp.j_q1,
        j2: jp.j_q2,
        ordered,
    })
}

/// One column step of the boundary model in queue form: the vertical
/// increments `j_col` of one column are inter-arrivals, the bulk weights of
/// the next column are services, and `t_init` is the horizontal increment on
/// the bottom row of the next column. Returns the next column's vertical
/// increments and its horizontal increments (the sojourns).
pub fn propagate_boundary(j_col: &[i64], bulk_column_weights: &[i64], t_init: i64) -> Result<(Vec<i64>, Vec<i64>)> {
    let q = lindley(j_col, bulk_column_weights, t_init)?;
    Ok((q.departures, q.sojourns))
}

/// Steps `X_j = J^ξ_{j e2} - Ĵ^η_{e1+(j-1)e2}` for `j` in `[-K+1, K]` and
/// partial sums `S_n` for `n` in `[-K, K]`, with `S_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryWalk {
    pub k: i64,
    steps: Vec<i64>,
    sums: Vec<i64>,
}

impl BoundaryWalk {
    /// `X_j`, `-K < j <= K`.
    pub fn step(&self, j: i64) -> i64 {
        assert!(-self.k < j && j <= self.k, "step index {j} outside (-{0}, {0}]", self.k);
        self.steps[(j + self.k - 1) as usize]
    }

    /// `S_n`, `-K <= n <= K`.
    pub fn s(&self, n: i64) -> i64 {
        assert!(n.abs() <= self.k, "walk index {n} outside [-{0}, {0}]", self.k);
        self.sums[(n + self.k) as usize]
    }

    /// `S_n <= 0` for all `1 <= n <= K`.
    pub fn positive_half_nonpositive(&self) -> bool {
        (1..=self.k).all(|n| self.s(n) <= 0)
    }

    /// `S_n <= 0` for all `-K <= n <= -1`.
    pub fn negative_half_nonpositive(&self) -> bool {
        (-self.k..=-1).all(|n| self.s(n) <= 0)
    }
}

/// Both columns are indexed by the step index `j`: `j_xi.get(j)` is
/// `J^ξ_{j e2}` and `jhat_eta.get(j)` is `Ĵ^η_{e1+(j-1)e2}`.
pub fn build_boundary_walk(j_xi: &IndexedColumn, jhat_eta: &IndexedColumn, k: usize) -> Result<BoundaryWalk> {
    if k == 0 {
        return param("walk half-length K must be positive");
    }
    let k = k as i64;
    let mut steps = Vec::with_capacity(2 * k as usize);
    for j in -k + 1..=k {
        match (j_xi.get(j), jhat_eta.get(j)) {
            (Some(x), Some(y)) => steps.push(x - y),
            _ => return param(format!("columns do not cover step index {j} of [{}, {k}]", -k + 1)),
        }
    }
    let mut sums = vec![0i64; 2 * k as usize + 1];
    let zero = k as usize;
    for n in 1..=k as usize {
        sums[zero + n] = sums[zero + n - 1] + steps[zero + n - 1];
    }
    for n in 1..=k as usize {
        // S_{-n} = S_{-n+1} - X_{-n+1}
        sums[zero - n] = sums[zero - n + 1] - steps[zero - n];
    }
    Ok(BoundaryWalk { k, steps, sums })
}

/// Mean step of the boundary walk when `J^ξ ~ Geom(r/p_xi)` and
/// `Ĵ^η ~ Geom(r/p_eta)`.
pub fn boundary_walk_drift(r: f64, p_xi: f64, p_eta: f64) -> f64 {
    r / (p_xi - r) - r / (p_eta - r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_run() {
        let q = lindley(&[1, 3], &[2, 1], 0).unwrap();
        assert_eq!(q.sojourns, vec![2, 1]);
        assert_eq!(q.departures, vec![3, 2]);
        assert_eq!(q.dual_services, vec![0, 2]);
    }

    #[test]
    fn idle_server() {
        let a = [4, 0, 2, 7];
        let q = lindley(&a, &[0; 4], 3).unwrap();
        assert_eq!(q.sojourns, vec![0; 4]);
        assert_eq!(q.departures, vec![4 - 3, 0, 2, 7]);
        assert_eq!(q.dual_services, vec![3, 0, 0, 0]);
        let q = lindley(&a, &[0; 4], 0).unwrap();
        assert_eq!(q.departures, a.to_vec());
    }

    #[test]
    fn length_mismatch() {
        assert!(lindley(&[1, 2], &[1], 0).is_err());
        assert!(lindley(&[1], &[-1], 0).is_err());
    }

    #[test]
    fn triple_map_examples() {
        assert_eq!(geometric_triple_map(3, 1, 2), (4, 2, 1));
        assert_eq!(geometric_triple_map(1, 4, 0), (0, 3, 1));
    }

    #[test]
    fn five_customer_interchange() {
        // every queue starts empty; values worked out by hand
        let b = [5, 3, 6, 2, 4];
        let a = [2, 4, 1, 3, 2];
        let s = [1, 2, 3, 1, 1];
        let sides = queue_identity_sides(&b, &a, &s, InterchangeInits::default()).unwrap();
        assert_eq!(sides.lhs, vec![8, 6, 4, 2, 3]);
        assert_eq!(sides.rhs, sides.lhs);
    }

    #[test]
    fn zero_services_reduce_to_first_queue() {
        let b = [3, 1, 4, 1, 5, 9];
        let a = [2, 6, 5, 3, 5, 8];
        let s = [0; 6];
        let sides = queue_identity_sides(&b, &a, &s, InterchangeInits::default()).unwrap();
        let dba = departures(&b, &a, 0).unwrap();
        assert_eq!(sides.lhs, dba);
        assert_eq!(sides.rhs[1..], dba[1..]);
    }

    #[test]
    fn walk_basics() {
        let x = IndexedColumn { start: -2, values: vec![1, 0, 2, 3, 1, 0] };
        let w = build_boundary_walk(&x, &x, 3).unwrap();
        assert!((-3..=3).all(|n| w.s(n) == 0));
        let y = IndexedColumn { start: -2, values: vec![0, 0, 0, 0, 0, 0] };
        let w = build_boundary_walk(&x, &y, 3).unwrap();
        assert_eq!(w.s(0), 0);
        assert_eq!((w.s(1), w.s(2), w.s(3)), (3, 4, 4));
        assert_eq!((w.s(-1), w.s(-2), w.s(-3)), (-2, -2, -3));
        for n in -2..=3 {
            assert_eq!(w.s(n) - w.s(n - 1), w.step(n));
        }
        assert!(build_boundary_walk(&x, &y, 4).is_err());
    }

    #[test]
    fn stationary_init_guards() {
        let mut s = RngStream::new(1, 1);
        assert_eq!(stationary_sojourn_init(&mut s, 0.0, 0.5).unwrap(), 0);
        assert!(matches!(stationary_sojourn_init(&mut s, 0.5, 0.5), Err(LppError::Instability(_))));
    }

    #[test]
    fn coupled_pair_degenerate_and_ordered() {
        let mut s = RngStream::new(4, 0);
        let p = sample_coupled_j_pair(&mut s, 0.25, 0.4, 0.4, 50).unwrap();
        assert_eq!(p.j_q1, p.j_q2);
        let p = sample_coupled_j_pair(&mut s, 0.25, 0.4, 0.7, 500).unwrap();
        assert!(p.dominated());
        assert!(sample_coupled_j_pair(&mut s, 0.25, 0.7, 0.4, 5).is_err());
        let cb = sample_coupled_boundary(&mut s, 0.25, 0.4, 0.7, 300, 300).unwrap();
        assert!(cb.ordered);
    }
}
