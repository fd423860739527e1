//! Geometric samplers and immutable weight fields.

use crate::error::{param, Result};
use crate::lattice::Point;
use crate::rng::RngStream;

/// Parameter of `Geom(rho)`: `P(X = n) = rho^n (1 - rho)`, `0 <= rho < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeomParam(f64);

impl GeomParam {
    pub fn new(rho: f64) -> Result<Self> {
        if (0.0..1.0).contains(&rho) {
            Ok(GeomParam(rho))
        } else {
            param(format!("geometric parameter must lie in [0,1), got {rho}"))
        }
    }

    pub fn rho(self) -> f64 {
        self.0
    }

    pub fn mean(self) -> f64 {
        self.0 / (1.0 - self.0)
    }

    pub fn variance(self) -> f64 {
        self.0 / ((1.0 - self.0) * (1.0 - self.0))
    }

    pub fn pmf(self, n: u64) -> f64 {
        self.0.powf(n as f64) * (1.0 - self.0)
    }

    /// `P(X >= n)`.
    pub fn tail(self, n: u64) -> f64 {
        self.0.powf(n as f64)
    }
}

/// One `Geom(rho)` draw by logarithmic inversion.
pub fn sample_geometric(stream: &mut RngStream, rho: GeomParam) -> u64 {
    let rho = rho.rho();
    if rho == 0.0 {
        return 0;
    }
    let u = stream.next_open01();
    let x = (u.ln() / rho.ln()).floor();
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x as u64
    }
}

/// Same as [`sample_geometric`] narrowed to the `u32` weight type.
pub fn sample_geometric_u32(stream: &mut RngStream, rho: GeomParam) -> u32 {
    u32::try_from(sample_geometric(stream, rho)).unwrap_or(u32::MAX)
}

/// Read access to vertex weights on a lattice rectangle `[lo, hi]`.
pub trait Weights {
    fn lo(&self) -> Point;
    fn hi(&self) -> Point;
    /// Weight at `p`. Panics if `p` is outside `[lo, hi]`.
    fn weight(&self, p: Point) -> u32;

    fn contains(&self, p: Point) -> bool {
        self.lo().le(p) && p.le(self.hi())
    }
}

/// Dense row-major grid of nonnegative weights on
/// `[origin, origin + (width-1, height-1)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightField {
    origin: Point,
    width: usize,
    height: usize,
    weights: Vec<u32>,
    r: Option<f64>,
}

impl WeightField {
    pub fn from_rows(origin: Point, width: usize, height: usize, weights: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return param("weight field dimensions must be positive");
        }
        if weights.len() != width * height {
            return param(format!(
                "weight field expects {} entries, got {}",
                width * height,
                weights.len()
            ));
        }
        Ok(WeightField {
            origin,
            width,
            height,
            weights,
            r: None,
        })
    }

    pub fn constant(origin: Point, width: usize, height: usize, value: u32) -> Result<Self> {
        Self::from_rows(origin, width, height, vec![value; width * height])
    }

    /// Builds a field over `[lo, hi]` from a site function.
    pub fn from_fn(lo: Point, hi: Point, mut f: impl FnMut(Point) -> u32) -> Result<Self> {
        if !lo.le(hi) {
            return param(format!("empty rectangle [{lo}, {hi}]"));
        }
        let width = (hi.x - lo.x + 1) as usize;
        let height = (hi.y - lo.y + 1) as usize;
        let mut weights = Vec::with_capacity(width * height);
        for j in 0..height as i64 {
            for i in 0..width as i64 {
                weights.push(f(Point::new(lo.x + i, lo.y + j)));
            }
        }
        Self::from_rows(lo, width, height, weights)
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Geometric parameter the field was sampled with, if any.
    pub fn r(&self) -> Option<f64> {
        self.r
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.weights
    }

    pub fn get(&self, p: Point) -> Option<u32> {
        if !self.contains(p) {
            return None;
        }
        let i = (p.x - self.origin.x) as usize;
        let j = (p.y - self.origin.y) as usize;
        Some(self.weights[j * self.width + i])
    }

    pub fn view(&self) -> FieldView<'_> {
        FieldView::Direct(self)
    }
}

impl Weights for WeightField {
    fn lo(&self) -> Point {
        self.origin
    }

    fn hi(&self) -> Point {
        self.origin + Point::new(self.width as i64 - 1, self.height as i64 - 1)
    }

    #[inline]
    fn weight(&self, p: Point) -> u32 {
        match self.get(p) {
            Some(w) => w,
            None => panic!("site {p} outside weight field [{}, {}]", self.lo(), self.hi()),
        }
    }
}

/// Samples `width * height` independent `Geom(r)` weights in row-major order
/// starting at `origin`.
pub fn sample_weight_field(
    stream: &mut RngStream,
    origin: Point,
    width: usize,
    height: usize,
    r: f64,
) -> Result<WeightField> {
    if !(r > 0.0 && r < 1.0) {
        return param(format!("weight parameter r must lie in (0,1), got {r}"));
    }
    if width == 0 || height == 0 {
        return param("weight field dimensions must be positive");
    }
    let g = GeomParam::new(r)?;
    let weights = (0..width * height)
        .map(|_| sample_geometric_u32(stream, g))
        .collect();
    let mut field = WeightField::from_rows(origin, width, height, weights)?;
    field.r = Some(r);
    Ok(field)
}

/// Zero-copy view of a field, possibly reflected through the origin
/// (`view(x) = base(-x)`).
#[derive(Clone, Copy, Debug)]
pub enum FieldView<'a> {
    Direct(&'a WeightField),
    Reflected(&'a WeightField),
}

impl<'a> FieldView<'a> {
    pub fn base(self) -> &'a WeightField {
        match self {
            FieldView::Direct(f) | FieldView::Reflected(f) => f,
        }
    }

    pub fn is_reflected(self) -> bool {
        matches!(self, FieldView::Reflected(_))
    }

    pub fn reflect(self) -> FieldView<'a> {
        match self {
            FieldView::Direct(f) => FieldView::Reflected(f),
            FieldView::Reflected(f) => FieldView::Direct(f),
        }
    }

    /// Copies the view into an owned field.
    pub fn materialize(self) -> WeightField {
        let mut f = WeightField::from_fn(self.lo(), self.hi(), |p| self.weight(p))
            .expect("view rectangle is nonempty");
        f.r = self.base().r;
        f
    }
}

impl Weights for FieldView<'_> {
    fn lo(&self) -> Point {
        match self {
            FieldView::Direct(f) => f.lo(),
            FieldView::Reflected(f) => -f.hi(),
        }
    }

    fn hi(&self) -> Point {
        match self {
            FieldView::Direct(f) => f.hi(),
            FieldView::Reflected(f) => -f.lo(),
        }
    }

    #[inline]
    fn weight(&self, p: Point) -> u32 {
        match self {
            FieldView::Direct(f) => f.weight(p),
            FieldView::Reflected(f) => f.weight(-p),
        }
    }
}

/// Reflection `ω̂_x = ω_{-x}` of a field as a view.
pub fn reflect_field(field: &WeightField) -> FieldView<'_> {
    FieldView::Reflected(field)
}
