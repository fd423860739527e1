//! Small statistics kit: summaries, goodness of fit, correlation, intervals
//! and log-log regression.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

/// Sample mean with the standard error `s/√n` (unbiased variance).
pub fn mean_se(xs: &[f64]) -> MeanSe {
    let n = xs.len();
    if n == 0 {
        return MeanSe { mean: f64::NAN, se: f64::NAN, n };
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let se = if n > 1 {
        let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
        (ss / (n - 1) as f64 / n as f64).sqrt()
    } else {
        f64::NAN
    };
    MeanSe { mean, se, n }
}

/// Empirical CDF of a sample.
#[derive(Clone, Debug)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(xs: &[f64]) -> Self {
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ecdf { sorted }
    }

    /// Fraction of the sample `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return f64::NAN;
        }
        let k = self.sorted.partition_point(|v| *v <= x);
        k as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Kolmogorov–Smirnov distance to a continuous CDF.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Cell boundaries used: cell `i < last` is `{bins[i]}`, the last cell is `>= bins[last]`.
    pub bins: Vec<u64>,
}

/// Outcome of a test that may lack the data to say anything.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Tested<T> {
    Done(T),
    Inconclusive(String),
}

impl<T> Tested<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Tested::Done(t) => Some(t),
            Tested::Inconclusive(_) => None,
        }
    }
}

const MIN_EXPECTED: f64 = 5.0;

/// Pearson chi-square goodness of fit of nonnegative integer samples against
/// `Geom(rho)`. Cells are the atoms `0, 1, ...` while the expected count
/// stays at least 5, and one tail cell collects the rest (merged back until
/// it too has expected count >= 5). At most `max_bins` cells are used.
pub fn chi_square_geometric(samples: &[u64], rho: f64, max_bins: usize) -> Tested<ChiSquare> {
    let n = samples.len() as f64;
    if !(0.0..1.0).contains(&rho) || rho == 0.0 {
        return Tested::Inconclusive(format!("geometric parameter {rho} leaves no spread to test"));
    }
    let pmf = |k: u64| (1.0 - rho) * rho.powi(k as i32);
    let tail = |k: u64| rho.powi(k as i32);
    let mut cut = 0u64;
    while (cut as usize) + 1 < max_bins && n * pmf(cut) >= MIN_EXPECTED && n * tail(cut + 1) >= MIN_EXPECTED {
        cut += 1;
    }
    // cells {0}, ..., {cut-1}, [cut, inf)
    let cells = cut as usize + 1;
    if cells < 2 {
        return Tested::Inconclusive(format!("{} samples give fewer than two cells with expected count >= 5", samples.len()));
    }
    let mut observed = vec![0u64; cells];
    for &x in samples {
        observed[(x.min(cut)) as usize] += 1;
    }
    let statistic: f64 = (0..cells)
        .map(|i| {
            let e = if i + 1 < cells { n * pmf(i as u64) } else { n * tail(cut) };
            let d = observed[i] as f64 - e;
            d * d / e
        })
        .sum();
    let df = cells - 1;
    let p_value = ChiSquared::new(df as f64).map(|c| c.sf(statistic)).unwrap_or(f64::NAN);
    Tested::Done(ChiSquare { statistic, df, p_value, bins: (0..=cut).collect() })
}

/// Sample autocorrelation at `lag`: the lag covariance over the variance,
/// both centred at the overall mean.
pub fn lag_correlation(xs: &[f64], lag: usize) -> Tested<f64> {
    if xs.len() <= lag + 1 {
        return Tested::Inconclusive(format!("{} samples cannot estimate lag {lag}", xs.len()));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    if var == 0.0 {
        return Tested::Inconclusive("constant sample".into());
    }
    let cov: f64 = xs.windows(lag + 1).map(|w| (w[0] - mean) * (w[lag] - mean)).sum();
    Tested::Done(cov / var)
}

/// Pearson correlation of two equally long samples.
pub fn cross_correlation(xs: &[f64], ys: &[f64]) -> Tested<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Tested::Inconclusive("need two samples of equal length >= 3".into());
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Tested::Inconclusive("constant sample".into());
    }
    Tested::Done(sxy / (sxx * syy).sqrt())
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    wilson_interval_z(k, n, 1.959_963_984_540_054)
}

pub fn wilson_interval_z(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Binomial proportion with its plug-in standard error.
pub fn proportion(k: u64, n: u64) -> MeanSe {
    let p = if n == 0 { f64::NAN } else { k as f64 / n as f64 };
    MeanSe { mean: p, se: (p * (1.0 - p) / n as f64).sqrt(), n: n as usize }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Tested<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Tested::Inconclusive("need at least two points".into());
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Tested::Inconclusive("all x equal".into());
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Tested::Done(LinearFit { slope, intercept: my - slope * mx, r_squared })
}

/// Least squares of `log y` on `log x`; points with `y <= 0` are dropped.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Tested<LinearFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    linear_fit(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_at_the_ends() {
        assert_eq!(wilson_interval(0, 50).0, 0.0);
        assert_eq!(wilson_interval(50, 50).1, 1.0);
        let (lo, hi) = wilson_interval(30, 100);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
    }

    #[test]
    fn ecdf_steps() {
        let e = Ecdf::new(&[3.0, 1.0, 2.0, 2.0]);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(10.0), 1.0);
    }

    #[test]
    fn exact_fit_has_unit_r_squared() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.5)).collect();
        let f = loglog_fit(&xs, &ys).done().unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn chi_square_perfect_counts() {
        // counts that match the expectations almost exactly
        let rho: f64 = 0.5;
        let n = 1024u64;
        let mut xs = Vec::new();
        for k in 0..10u64 {
            let c = (n as f64 * (1.0 - rho) * rho.powi(k as i32)).round() as usize;
            xs.extend(std::iter::repeat_n(k, c));
        }
        let t = chi_square_geometric(&xs, rho, 50).done().unwrap();
        assert!(t.p_value > 0.99, "{t:?}");
        assert!(t.bins.len() >= 3);
    }

    #[test]
    fn chi_square_too_few_samples() {
        assert!(matches!(chi_square_geometric(&[0, 1], 0.5, 50), Tested::Inconclusive(_)));
    }

    #[test]
    fn lag_correlation_of_alternating_sequence() {
        let xs: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!((lag_correlation(&xs, 1).done().unwrap() + 0.99).abs() < 1e-12);
    }
}
