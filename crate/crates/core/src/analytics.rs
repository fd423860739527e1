//! Closed-form shape functions, parameter/direction maps and explicit
//! constants for geometric weights with parameter `r`.
//!
//! Directions are normalised to `ξ1 + ξ2 = 1` on entry.

use crate::error::{param, Result};

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        param(format!("r must lie in (0,1), got {r}"))
    }
}

fn check_p(p: f64, r: f64) -> Result<()> {
    check_r(r)?;
    if p > r && p < 1.0 {
        Ok(())
    } else {
        param(format!("p must lie in (r,1) = ({r},1), got {p}"))
    }
}

/// Scales a positive vector onto the simplex.
pub fn normalize(xi: (f64, f64)) -> Result<(f64, f64)> {
    let (a, b) = xi;
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return param(format!("direction components must be positive, got ({a}, {b})"));
    }
    let s = a + b;
    Ok((a / s, b / s))
}

/// `p̄(ξ)`: the boundary parameter whose characteristic direction is `ξ`.
pub fn pbar(xi: (f64, f64), r: f64) -> Result<f64> {
    check_r(r)?;
    let (a, b) = normalize(xi)?;
    let root = (r * a * b).sqrt();
    Ok((r * (a + b) + (r + 1.0) * root) / (a + r * b + 2.0 * root))
}

/// `ξ̄(p)`, the inverse of [`pbar`] on `(r, 1)`.
pub fn xibar(p: f64, r: f64) -> Result<(f64, f64)> {
    check_p(p, r)?;
    // Same value as p²(r+1) - 4pr + r(r+1), written without cancellation.
    let den = r * (1.0 - p) * (1.0 - p) + (p - r) * (p - r);
    let x1 = r * (1.0 - p) * (1.0 - p) / den;
    let x2 = (p - r) * (p - r) / den;
    Ok((x1, x2))
}

/// Shape function `γ(x) = (r(x1+x2) + 2√(r x1 x2)) / (1-r)`.
pub fn shape_gamma(x: (f64, f64), r: f64) -> Result<f64> {
    check_r(r)?;
    let (x1, x2) = x;
    if !(x1 >= 0.0 && x2 >= 0.0) {
        return param(format!("shape function needs x >= 0, got ({x1}, {x2})"));
    }
    Ok((r * (x1 + x2) + 2.0 * (r * x1 * x2).sqrt()) / (1.0 - r))
}

/// Mean of the stationary passage time: `M^p(x) = p x1/(1-p) + r x2/(p-r)`.
pub fn stationary_m(p: f64, x: (f64, f64), r: f64) -> Result<f64> {
    check_p(p, r)?;
    let (x1, x2) = x;
    if !(x1 >= 0.0 && x2 >= 0.0) {
        return param(format!("x must be nonnegative, got ({x1}, {x2})"));
    }
    Ok(p * x1 / (1.0 - p) + r * x2 / (p - r))
}

/// Lower member `p̄_-^λ(a,b)` of the pair `p_- < p̄ < p_+ = λ p_-` with
/// `M^{p_-}(a,b) = M^{p_+}(a,b)`.
///
/// For `a < b` the root is evaluated in conjugate form,
/// `2r(b - ra) / (√D - r(λ+1)(a-b))`, which has no cancellation and no
/// `0/0` at `a = rb`.
pub fn pbar_minus_lambda(a: f64, b: f64, lambda: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    if !(a > 0.0 && b > 0.0) {
        return param(format!("need a, b > 0, got ({a}, {b})"));
    }
    let lmax = 1.0 / r;
    if !(lambda >= 1.0 && lambda <= lmax * (1.0 + 1e-12)) {
        return param(format!("lambda must lie in [1, 1/r] = [1, {lmax}], got {lambda}"));
    }
    let lambda = lambda.min(lmax);
    if (a - r * b).abs() < 1e-9 * b {
        return Ok((r + 1.0) / (lambda + 1.0));
    }
    let lin = r * (lambda + 1.0) * (a - b);
    let d = (lin * lin - 4.0 * r * lambda * (r * a - b) * (a - r * b)).max(0.0);
    let sd = d.sqrt();
    let p = if a < b {
        2.0 * r * (b - r * a) / (sd - lin)
    } else {
        (lin + sd) / (2.0 * lambda * (a - r * b))
    };
    Ok(p)
}

/// `p̄_+^λ = λ p̄_-^λ`.
pub fn pbar_plus_lambda(a: f64, b: f64, lambda: f64, r: f64) -> Result<f64> {
    Ok(lambda * pbar_minus_lambda(a, b, lambda, r)?)
}

/// `L^{p,q}(m,n) = m log((1-p)/(1-q)) + n log((1-r/q)/(1-r/p))`, the
/// log-MGF of the two-parameter stationary passage time at tilt `log(q/p)`.
pub fn l_pq(mn: (f64, f64), p: f64, q: f64, r: f64) -> Result<f64> {
    check_p(p, r)?;
    check_p(q, r)?;
    let (m, n) = mn;
    let d = q - p;
    Ok(m * (d / (1.0 - q)).ln_1p() + n * (r * d / (q * (p - r))).ln_1p())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurlyL {
    Infinite,
    Finite { value: f64, argmin: f64 },
}

impl CurlyL {
    pub fn value(self) -> f64 {
        match self {
            CurlyL::Infinite => f64::INFINITY,
            CurlyL::Finite { value, .. } => value,
        }
    }
}

/// `inf_{q < s < 1/λ} L^{s, λs}(m,n)`, attained at `s = max(q, p̄_-^λ(m,n))`;
/// infinite when `λ >= 1/q`.
pub fn curly_l(lambda: f64, q: f64, mn: (f64, f64), r: f64) -> Result<CurlyL> {
    check_r(r)?;
    if !(q >= r && q < 1.0) {
        return param(format!("q must lie in [r,1), got {q}"));
    }
    if !(lambda >= 1.0) {
        return param(format!("lambda must be >= 1, got {lambda}"));
    }
    if lambda * q >= 1.0 {
        return Ok(CurlyL::Infinite);
    }
    let s = q.max(pbar_minus_lambda(mn.0, mn.1, lambda, r)?);
    if lambda == 1.0 {
        return Ok(CurlyL::Finite { value: 0.0, argmin: s });
    }
    Ok(CurlyL::Finite {
        value: l_pq(mn, s, lambda * s, r)?,
        argmin: s,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub r: f64,
    pub p: f64,
}

impl ModelParams {
    pub fn from_p(r: f64, p: f64) -> Result<Self> {
        check_p(p, r)?;
        Ok(ModelParams { r, p })
    }

    pub fn from_direction(r: f64, xi: (f64, f64)) -> Result<Self> {
        Ok(ModelParams { r, p: pbar(xi, r)? })
    }

    pub fn direction(&self) -> (f64, f64) {
        xibar(self.p, self.r).expect("validated on construction")
    }
}

/// The cone `S_δ = {x : x1 >= δ x2, x2 >= δ x1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeParams {
    pub delta: f64,
}

impl ConeParams {
    pub fn new(delta: f64) -> Result<Self> {
        if delta > 0.0 && delta < 1.0 {
            Ok(ConeParams { delta })
        } else {
            param(format!("delta must lie in (0,1), got {delta}"))
        }
    }

    pub fn contains(&self, x: (f64, f64)) -> bool {
        x.0 > 0.0 && x.1 > 0.0 && x.0 >= self.delta * x.1 && x.1 >= self.delta * x.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TiltParams {
    pub lambda: f64,
    pub q: f64,
}

impl TiltParams {
    pub fn new(lambda: f64, q: f64, r: f64) -> Result<Self> {
        check_r(r)?;
        if !(lambda >= 1.0) || !(q >= r && q < 1.0) {
            return param(format!("need lambda >= 1 and q in [r,1), got lambda={lambda}, q={q}"));
        }
        Ok(TiltParams { lambda, q })
    }

    /// `λ < 1/q`, i.e. the tilted functional is finite.
    pub fn is_finite(&self) -> bool {
        self.lambda * self.q < 1.0
    }
}

/// Explicit constants in the cone `S_δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// `γ(x) >= shape_lo |x|_1`
    pub shape_lo: f64,
    /// `γ(x) <= shape_hi |x|_1`
    pub shape_hi: f64,
    /// `p̄(x) >= pbar_lo` on `S_δ`
    pub pbar_lo: f64,
    /// `p̄(x) <= pbar_hi` on `S_δ`
    pub pbar_hi: f64,
}

/// Slope constant for `p̄_-^λ - p̄ >= -C0 (λ - 1)`; needs `δ < r`.
pub fn c0(delta: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    if !(delta > 0.0 && delta < r) {
        return param(format!("C0 needs 0 < delta < r, got delta={delta}, r={r}"));
    }
    let di = 1.0 / delta;
    let srd = (r * delta).sqrt();
    let t1 = (di + 1.0) * ((1.0 + r).powi(2) * delta + 2.0 * r * r + 2.0) / (8.0 * (1.0 - r).powi(2) * delta);
    let t2 = r * (r + 1.0) * (di + 1.0) / (4.0 * (1.0 - r) * srd);
    let t3 = (r * di + 1.0) / (2.0 * (1.0 - r) * srd);
    Ok((r + 1.0).max(t1 + t2 + t3))
}

/// Lipschitz constant of `p̄` in the direction on `S_δ`.
pub fn c1(delta: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    ConeParams::new(delta)?;
    let sr = r.sqrt();
    Ok((1.0 + delta).powi(2) * r * (1.0 - r) / (2.0 * delta * delta * sr * (1.0 + sr).powi(2)))
}

/// Lipschitz constant of `ξ̄(q)·e1` in `q`.
pub fn c2(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(2.0 * (r + 1.0).powi(2) / (r * (1.0 - r)))
}

pub fn bound_constants(delta: f64, r: f64) -> Result<BoundConstants> {
    let sr = r.sqrt();
    let (pbar_lo, pbar_hi) = pbar_cone_range(delta, r);
    Ok(BoundConstants {
        c0: c0(delta, r)?,
        c1: c1(delta, r)?,
        c2: c2(r)?,
        shape_lo: r / (1.0 - r),
        shape_hi: (r + sr) / (1.0 - r),
        pbar_lo,
        pbar_hi,
    })
}

/// Checks `p̄_-^λ(a,b) - p̄(a,b) >= -C0 (λ-1)` for `(a,b)` in `S_δ`.
pub fn tilt_gap_bound_holds(a: f64, b: f64, lambda: f64, delta: f64, r: f64) -> Result<bool> {
    if !ConeParams::new(delta)?.contains((a, b)) {
        return param(format!("({a}, {b}) not in the cone for delta={delta}"));
    }
    let gap = pbar_minus_lambda(a, b, lambda, r)? - pbar((a, b), r)?;
    Ok(gap >= -c0(delta, r)? * (lambda - 1.0))
}

/// Checks `|p̄(ξ) - p̄(ζ)| <= C1 |ξ1/|ξ| - ζ1/|ζ||` for `ξ, ζ` in `S_δ`.
pub fn pbar_lipschitz_holds(xi: (f64, f64), zeta: (f64, f64), delta: f64, r: f64) -> Result<bool> {
    let cone = ConeParams::new(delta)?;
    if !cone.contains(xi) || !cone.contains(zeta) {
        return param("directions must lie in the cone");
    }
    let lhs = (pbar(xi, r)? - pbar(zeta, r)?).abs();
    let rhs = c1(delta, r)? * (normalize(xi)?.0 - normalize(zeta)?.0).abs();
    Ok(lhs <= rhs * (1.0 + 1e-12) + 1e-15)
}

/// Checks `|ξ̄(q)·e1 - ξ1/|ξ|| <= C2 |q - p̄(ξ)|`.
pub fn xibar_lipschitz_holds(xi: (f64, f64), q: f64, r: f64) -> Result<bool> {
    let lhs = (xibar(q, r)?.0 - normalize(xi)?.0).abs();
    let rhs = c2(r)? * (q - pbar(xi, r)?).abs();
    Ok(lhs <= rhs * (1.0 + 1e-12) + 1e-15)
}

/// Checks `r|x|_1/(1-r) <= γ(x) <= (r+√r)|x|_1/(1-r)`.
pub fn shape_linear_bounds_hold(x: (f64, f64), r: f64) -> Result<bool> {
    let g = shape_gamma(x, r)?;
    let l1 = x.0 + x.1;
    let lo = r * l1 / (1.0 - r);
    let hi = (r + r.sqrt()) * l1 / (1.0 - r);
    let tol = 1e-12 * (1.0 + g);
    Ok(lo - tol <= g && g <= hi + tol)
}

/// Checks the two-sided bound on `p̄(x)` for `x` in `S_δ`.
pub fn pbar_cone_bounds_hold(x: (f64, f64), delta: f64, r: f64) -> Result<bool> {
    if !ConeParams::new(delta)?.contains(x) {
        return param("x must lie in the cone");
    }
    let (lo, hi) = pbar_cone_range(delta, r);
    let p = pbar(x, r)?;
    Ok(lo - 1e-14 <= p && p <= hi + 1e-14)
}

/// Range of `p̄` over the cone `S_δ`.
pub fn pbar_cone_range(delta: f64, r: f64) -> (f64, f64) {
    let sr = r.sqrt();
    (
        r + (1.0 - r) * delta * (r * delta).sqrt() / (1.0 + sr).powi(2),
        1.0 - (1.0 - sr) * delta / (1.0 + sr),
    )
}

/// Second-order expansion of `λ ↦ L^{s,λs}(a,b)` at `λ = 1`: returns the
/// absolute remainder and the cubic bound `2 ε^{-3} (a+b) (λ-1)^3`.
///
/// Domain: `ε ∈ (0, min(r, 1-s, (1-r)/2))`, `s ∈ (r,1)`,
/// `λ ∈ [max((r+ε)/s, 1), (1-ε)/s]`.
///
/// The cubic bound controls the third derivative only while `λ's - r >= ε`
/// along the whole segment `λ' ∈ [1, λ]`, i.e. when also `s - r >= ε`.
/// With `s - r < ε` the remainder can exceed it.
pub fn tilt_taylor_remainder(a: f64, b: f64, s: f64, lambda: f64, eps: f64, r: f64) -> Result<(f64, f64)> {
    check_p(s, r)?;
    if !(a > 0.0 && b > 0.0) {
        return param("need a, b > 0");
    }
    if !(eps > 0.0 && eps < r.min(1.0 - s).min((1.0 - r) / 2.0)) {
        return param(format!("epsilon {eps} outside its domain"));
    }
    let lo = ((r + eps) / s).max(1.0);
    let hi = (1.0 - eps) / s;
    if !(lambda >= lo && lambda <= hi) {
        return param(format!("lambda {lambda} outside [{lo}, {hi}]"));
    }
    let d = lambda - 1.0;
    let l = l_pq((a, b), s, lambda * s, r)?;
    let first = a * s / (1.0 - s) + b * r / (s - r);
    let second = a * s * s / (1.0 - s).powi(2) - b * r * (2.0 * s - r) / (s - r).powi(2);
    let rem = (l - d * first - 0.5 * d * d * second).abs();
    Ok((rem, 2.0 * eps.powi(-3) * (a + b) * d.powi(3)))
}

/// [`tilt_taylor_remainder`] as a predicate. The remainder is a difference of
/// terms of size `O(λ-1)`, so it is compared against the bound with an
/// allowance of a few ulps of those terms.
pub fn tilt_taylor_bound_holds(a: f64, b: f64, s: f64, lambda: f64, eps: f64, r: f64) -> Result<bool> {
    let (rem, bound) = tilt_taylor_remainder(a, b, s, lambda, eps, r)?;
    let d = lambda - 1.0;
    let l = l_pq((a, b), s, lambda * s, r)?;
    let first = a * s / (1.0 - s) + b * r / (s - r);
    let second = a * s * s / (1.0 - s).powi(2) + b * r * (2.0 * s - r) / (s - r).powi(2);
    let ulps = 16.0 * f64::EPSILON * (l.abs() + d * first + d * d * second);
    Ok(rem <= bound + ulps)
}
