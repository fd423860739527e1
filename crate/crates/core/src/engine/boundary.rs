use super::grid::{Direction, GridKind, PassageGrid};
use crate::error::{param, Result};
use crate::lattice::Point;
use crate::rng::RngStream;
use crate::sampling::{sample_geometric, GeomParam, Weights};

/// Boundary weights on the two axes through `corner`: `i_row[k-1]` sits at
/// `corner + k e1`, `j_col[l-1]` at `corner + l e2`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryBoundary {
    pub corner: Point,
    pub i_row: Vec<i64>,
    pub j_col: Vec<i64>,
    /// `(r, p)` when sampled from the stationary law.
    pub params: Option<(f64, f64)>,
}

impl StationaryBoundary {
    pub fn new(corner: Point, i_row: Vec<i64>, j_col: Vec<i64>) -> Self {
        StationaryBoundary {
            corner,
            i_row,
            j_col,
            params: None,
        }
    }

    /// Uses the field's own weights on the axes as boundary weights, which
    /// turns the boundary model into bulk LPP minus the corner weight.
    pub fn from_axes<W: Weights + ?Sized>(field: &W, corner: Point, m: usize, n: usize) -> Result<Self> {
        let far = corner + Point::new(m as i64, n as i64);
        if !field.contains(corner) || !field.contains(far) {
            return param(format!("axes of [{corner}, {far}] not inside weight field"));
        }
        let i_row = (1..=m as i64)
            .map(|k| i64::from(field.weight(corner + Point::new(k, 0))))
            .collect();
        let j_col = (1..=n as i64)
            .map(|l| i64::from(field.weight(corner + Point::new(0, l))))
            .collect();
        Ok(Self::new(corner, i_row, j_col))
    }

    pub fn far_corner(&self) -> Point {
        self.corner + Point::new(self.i_row.len() as i64, self.j_col.len() as i64)
    }

    /// `sum_{i<=k} I_{corner + i e1}`.
    pub fn prefix_i(&self, k: usize) -> i64 {
        self.i_row[..k].iter().sum()
    }

    pub fn prefix_j(&self, l: usize) -> i64 {
        self.j_col[..l].iter().sum()
    }
}

/// Independent `Geom(p)` row of length `m` then `Geom(r/p)` column of length
/// `n`, drawn in that order.
pub fn sample_stationary_boundary(
    stream: &mut RngStream,
    corner: Point,
    m: usize,
    n: usize,
    r: f64,
    p: f64,
) -> Result<StationaryBoundary> {
    if !(0.0 < r && r < p && p < 1.0) {
        return param(format!("stationary boundary needs 0 < r < p < 1, got r={r}, p={p}"));
    }
    let gi = GeomParam::new(p)?;
    let gj = GeomParam::new(r / p)?;
    let i_row = (0..m).map(|_| sample_geometric(stream, gi) as i64).collect();
    let j_col = (0..n).map(|_| sample_geometric(stream, gj) as i64).collect();
    Ok(StationaryBoundary {
        corner,
        i_row,
        j_col,
        params: Some((r, p)),
    })
}

fn check_interior<W: Weights + ?Sized>(field: &W, lo: Point, hi: Point) -> Result<()> {
    if lo.le(hi) && !(field.contains(lo) && field.contains(hi)) {
        return param(format!(
            "boundary arrays span [{lo}, {hi}], which is not inside the weight field [{}, {}]",
            field.lo(),
            field.hi()
        ));
    }
    Ok(())
}

/// Southwest boundary model `G^{SW}_{corner, y}` on `[corner, far_corner]`.
///
/// Axis values are prefix sums of the boundary; the interior uses the bulk
/// recursion. The corner's own weight is never read.
pub fn sw_boundary_passage<W: Weights + ?Sized>(field: &W, boundary: &StationaryBoundary) -> Result<PassageGrid> {
    let corner = boundary.corner;
    let hi = boundary.far_corner();
    check_interior(field, corner + Point::new(1, 1), hi)?;
    let mut g = PassageGrid::zeroed(corner, Direction::Forward, GridKind::SwBoundary, corner, hi);
    let w = g.width;
    let mut acc = 0;
    for (k, v) in boundary.i_row.iter().enumerate() {
        acc += v;
        g.values[k + 1] = acc;
    }
    acc = 0;
    for (l, v) in boundary.j_col.iter().enumerate() {
        acc += v;
        g.values[(l + 1) * w] = acc;
    }
    for j in 1..g.height {
        let y = corner.y + j as i64;
        for i in 1..w {
            let k = j * w + i;
            let p = Point::new(corner.x + i as i64, y);
            g.values[k] = g.values[k - 1].max(g.values[k - w]) + i64::from(field.weight(p));
        }
    }
    Ok(g)
}

/// Northeast boundary model `Ĝ_{x, corner}` on `[corner - (m, n), corner]`,
/// where `ihat_row[k-1]` sits at `corner - k e1` and `jhat_col[l-1]` at
/// `corner - l e2`.
pub fn ne_boundary_passage<W: Weights + ?Sized>(
    field: &W,
    ihat_row: &[i64],
    jhat_col: &[i64],
    corner: Point,
) -> Result<PassageGrid> {
    let lo = corner - Point::new(ihat_row.len() as i64, jhat_col.len() as i64);
    check_interior(field, lo, corner - Point::new(1, 1))?;
    let mut g = PassageGrid::zeroed(corner, Direction::Reverse, GridKind::NeBoundary, lo, corner);
    let (w, h) = (g.width, g.height);
    let top = (h - 1) * w;
    let mut acc = 0;
    for (k, v) in ihat_row.iter().enumerate() {
        acc += v;
        g.values[top + w - 2 - k] = acc;
    }
    acc = 0;
    for (l, v) in jhat_col.iter().enumerate() {
        acc += v;
        g.values[(h - 2 - l) * w + w - 1] = acc;
    }
    for j in (0..h - 1).rev() {
        let y = lo.y + j as i64;
        for i in (0..w - 1).rev() {
            let k = j * w + i;
            let p = Point::new(lo.x + i as i64, y);
            g.values[k] = g.values[k + 1].max(g.values[k + w]) + i64::from(field.weight(p));
        }
    }
    Ok(g)
}
