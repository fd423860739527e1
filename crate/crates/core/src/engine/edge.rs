use crate::error::{param, Result};
use crate::lattice::Point;
use crate::sampling::Weights;

/// Values indexed by consecutive integers `start, start + 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedColumn {
    pub start: i64,
    pub values: Vec<i64>,
}

impl IndexedColumn {
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<i64> {
        if n < self.start {
            return None;
        }
        self.values.get((n - self.start) as usize).copied()
    }
}

/// `G_{u, (x, n)}` for `n` in `[u.y, top]`, keeping only one column of
/// state while sweeping from `u.x` to `x`.
pub fn column_from<W: Weights + ?Sized>(field: &W, u: Point, x: i64, top: i64) -> Result<IndexedColumn> {
    let hi = Point::new(x, top);
    if !u.le(hi) || !field.contains(u) || !field.contains(hi) {
        return param(format!("rectangle [{u}, {hi}] not inside weight field"));
    }
    let h = (top - u.y + 1) as usize;
    let mut buf = vec![0i64; h];
    let mut acc = 0;
    for (j, b) in buf.iter_mut().enumerate() {
        acc += i64::from(field.weight(Point::new(u.x, u.y + j as i64)));
        *b = acc;
    }
    for c in u.x + 1..=x {
        buf[0] += i64::from(field.weight(Point::new(c, u.y)));
        for j in 1..h {
            buf[j] = buf[j].max(buf[j - 1]) + i64::from(field.weight(Point::new(c, u.y + j as i64)));
        }
    }
    Ok(IndexedColumn { start: u.y, values: buf })
}

/// `G_{(x, n), v}` for `n` in `[bottom, v.y]`, sweeping from `v.x` down to `x`.
pub fn column_to<W: Weights + ?Sized>(field: &W, v: Point, x: i64, bottom: i64) -> Result<IndexedColumn> {
    let lo = Point::new(x, bottom);
    if !lo.le(v) || !field.contains(v) || !field.contains(lo) {
        return param(format!("rectangle [{lo}, {v}] not inside weight field"));
    }
    let h = (v.y - bottom + 1) as usize;
    let mut buf = vec![0i64; h];
    let mut acc = 0;
    for j in (0..h).rev() {
        acc += i64::from(field.weight(Point::new(v.x, bottom + j as i64)));
        buf[j] = acc;
    }
    for c in (x..v.x).rev() {
        buf[h - 1] += i64::from(field.weight(Point::new(c, v.y)));
        for j in (0..h - 1).rev() {
            buf[j] = buf[j].max(buf[j + 1]) + i64::from(field.weight(Point::new(c, bottom + j as i64)));
        }
    }
    Ok(IndexedColumn { start: bottom, values: buf })
}

/// Decides `max_n a(n) + b(n) == a(0) + b(0)` over the common index range,
/// scanning outward from 0 so that the usual failure is found quickly.
pub fn edge_usage_from_columns(a: &IndexedColumn, b: &IndexedColumn) -> bool {
    let lo = a.start.max(b.start);
    let hi = a.end().min(b.end());
    if lo > 0 || hi < 0 {
        return false;
    }
    let at = |n: i64| a.values[(n - a.start) as usize] + b.values[(n - b.start) as usize];
    let base = at(0);
    let reach = hi.max(-lo);
    for d in 1..=reach {
        if d <= hi && at(d) > base {
            return false;
        }
        if -d >= lo && at(-d) > base {
            return false;
        }
    }
    true
}

/// The event that some geodesic from `u` to `v` uses the edge `(0, e1)`.
///
/// Every path from `u` to `v` crosses from column 0 to column 1 exactly
/// once, so `G_{u,v} = max_n G_{u,(0,n)} + G_{(1,n),v}` and the event is that
/// `n = 0` attains this maximum.
pub fn edge_usage_event<W: Weights + ?Sized>(field: &W, u: Point, v: Point) -> Result<bool> {
    if u.x > 0 || u.y > 0 || v.x < 1 || v.y < 0 {
        return param(format!("edge event needs u <= 0 and v >= e1, got u={u}, v={v}"));
    }
    let a = column_from(field, u, 0, v.y)?;
    let b = column_to(field, v, 1, u.y)?;
    Ok(edge_usage_from_columns(&a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{bulk_passage_forward_to, bulk_passage_reverse_from};
    use crate::sampling::{sample_weight_field, WeightField};

    #[test]
    fn columns_match_full_grids() {
        let mut s = crate::RngStream::new(77, 3);
        let f = sample_weight_field(&mut s, Point::new(-5, -5), 11, 11, 0.35).unwrap();
        let u = Point::new(-4, -3);
        let col = column_from(&f, u, 0, 4).unwrap();
        let g = bulk_passage_forward_to(&f, u, Point::new(0, 4)).unwrap();
        for n in -3..=4 {
            assert_eq!(col.get(n), Some(g.value(Point::new(0, n))));
        }
        let v = Point::new(4, 2);
        let col = column_to(&f, v, 1, -5).unwrap();
        let r = bulk_passage_reverse_from(&f, Point::new(1, -5), v).unwrap();
        for n in -5..=2 {
            assert_eq!(col.get(n), Some(r.value(Point::new(1, n))));
        }
    }

    #[test]
    fn collinear_horizontal_pair_uses_the_edge() {
        let mut s = crate::RngStream::new(5, 0);
        let f = sample_weight_field(&mut s, Point::new(-3, -3), 7, 7, 0.25).unwrap();
        assert!(edge_usage_event(&f, Point::new(-2, 0), Point::new(3, 0)).unwrap());
    }

    #[test]
    fn heavy_upper_row_diverts_the_geodesic() {
        let mut f = vec![0u32; 16];
        // field on [-1,2]^2, row-major from (-1,-1)
        let idx = |x: i64, y: i64| ((y + 1) * 4 + (x + 1)) as usize;
        f[idx(0, 1)] = 100;
        f[idx(1, 1)] = 100;
        let f = WeightField::from_rows(Point::new(-1, -1), 4, 4, f).unwrap();
        assert!(!edge_usage_event(&f, Point::new(-1, -1), Point::new(2, 2)).unwrap());
    }

    #[test]
    fn bad_geometry_is_rejected() {
        let f = WeightField::constant(Point::new(-2, -2), 5, 5, 1).unwrap();
        assert!(edge_usage_event(&f, Point::new(1, 0), Point::new(2, 2)).is_err());
        assert!(edge_usage_event(&f, Point::new(-1, -1), Point::new(0, 2)).is_err());
    }
}
