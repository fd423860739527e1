use super::boundary::StationaryBoundary;
use super::grid::PassageGrid;
use crate::error::{param, Result};
use crate::lattice::{Axis, Point};

/// Increments `G(y) - G(y - axis)` of a passage grid, defined at every site
/// `y` with `y - axis` still in the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct IncrementTable {
    axis: Axis,
    lo: Point,
    width: usize,
    height: usize,
    values: Vec<i64>,
}

impl IncrementTable {
    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.lo + Point::new(self.width as i64 - 1, self.height as i64 - 1)
    }

    pub fn get(&self, p: Point) -> Option<i64> {
        if !(self.lo.le(p) && p.le(self.hi())) {
            return None;
        }
        let d = p - self.lo;
        Some(self.values[d.y as usize * self.width + d.x as usize])
    }

    pub fn value(&self, p: Point) -> i64 {
        self.get(p)
            .unwrap_or_else(|| panic!("no {:?} increment at {p}", self.axis))
    }
}

/// `I_y = G(y) - G(y - e1)` or `J_y = G(y) - G(y - e2)` over the grid. The
/// table is empty when the grid has a single column (resp. row).
pub fn increment_fields(grid: &PassageGrid, axis: Axis) -> IncrementTable {
    let e = axis.unit();
    let lo = grid.lo() + e;
    let width = grid.width() - e.x as usize;
    let height = grid.height() - e.y as usize;
    let mut values = Vec::with_capacity(width * height);
    for j in 0..height as i64 {
        for i in 0..width as i64 {
            let p = lo + Point::new(i, j);
            values.push(grid.value(p) - grid.value(p - e));
        }
    }
    IncrementTable {
        axis,
        lo,
        width,
        height,
        values,
    }
}

/// Boundary at `corner` built from the increments of `grid`:
/// `I_{corner + k e1}` for `k = 1..=m` and `J_{corner + l e2}` for `l = 1..=n`.
/// With this boundary `G_{x,z} = G_{x,corner} + G^{SW}_{corner,z}`.
pub fn push_forward_boundary(grid: &PassageGrid, corner: Point, m: usize, n: usize) -> Result<StationaryBoundary> {
    let far = corner + Point::new(m as i64, n as i64);
    if !grid.contains(corner) || !grid.contains(far) {
        return param(format!("[{corner}, {far}] not inside the passage grid"));
    }
    let i_row = (1..=m as i64)
        .map(|k| {
            let p = corner + Point::new(k, 0);
            grid.value(p) - grid.value(p - Point::E1)
        })
        .collect();
    let j_col = (1..=n as i64)
        .map(|l| {
            let p = corner + Point::new(0, l);
            grid.value(p) - grid.value(p - Point::E2)
        })
        .collect();
    Ok(StationaryBoundary::new(corner, i_row, j_col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::bulk_passage_forward;
    use crate::sampling::WeightField;

    #[test]
    fn single_row_increments_are_weights() {
        let f = WeightField::from_rows(Point::new(5, 0), 5, 1, vec![2, 7, 1, 8, 2]).unwrap();
        let g = bulk_passage_forward(&f, Point::new(5, 0)).unwrap();
        let t = increment_fields(&g, Axis::E1);
        let got: Vec<i64> = (6..10).map(|x| t.value(Point::new(x, 0))).collect();
        assert_eq!(got, vec![7, 1, 8, 2]);
        assert_eq!(t.get(Point::new(5, 0)), None);
        let tj = increment_fields(&g, Axis::E2);
        assert_eq!(tj.get(Point::new(6, 0)), None);
    }
}
