use super::grid::{Direction, GridKind, PassageGrid};
use crate::error::{param, Result};
use crate::lattice::Point;
use crate::sampling::Weights;

/// `G_{anchor, y}` for every `y` in `[anchor, field.hi()]`.
pub fn bulk_passage_forward<W: Weights + ?Sized>(field: &W, anchor: Point) -> Result<PassageGrid> {
    bulk_passage_forward_to(field, anchor, field.hi())
}

/// `G_{anchor, y}` for every `y` in `[anchor, hi]`.
pub fn bulk_passage_forward_to<W: Weights + ?Sized>(field: &W, anchor: Point, hi: Point) -> Result<PassageGrid> {
    if !field.contains(anchor) {
        return param(format!("anchor {anchor} outside weight field"));
    }
    if !anchor.le(hi) || !field.contains(hi) {
        return param(format!("rectangle [{anchor}, {hi}] not inside weight field"));
    }
    let mut g = PassageGrid::zeroed(anchor, Direction::Forward, GridKind::Bulk, anchor, hi);
    let w = g.width;
    for j in 0..g.height {
        let y = anchor.y + j as i64;
        for i in 0..w {
            let p = Point::new(anchor.x + i as i64, y);
            let k = j * w + i;
            let prev = match (i, j) {
                (0, 0) => 0,
                (_, 0) => g.values[k - 1],
                (0, _) => g.values[k - w],
                _ => g.values[k - 1].max(g.values[k - w]),
            };
            g.values[k] = prev + i64::from(field.weight(p));
        }
    }
    Ok(g)
}

/// `G_{x, anchor}` for every `x` in `[field.lo(), anchor]`.
pub fn bulk_passage_reverse<W: Weights + ?Sized>(field: &W, anchor: Point) -> Result<PassageGrid> {
    bulk_passage_reverse_from(field, field.lo(), anchor)
}

/// `G_{x, anchor}` for every `x` in `[lo, anchor]`.
pub fn bulk_passage_reverse_from<W: Weights + ?Sized>(field: &W, lo: Point, anchor: Point) -> Result<PassageGrid> {
    if !field.contains(anchor) {
        return param(format!("anchor {anchor} outside weight field"));
    }
    if !lo.le(anchor) || !field.contains(lo) {
        return param(format!("rectangle [{lo}, {anchor}] not inside weight field"));
    }
    let mut g = PassageGrid::zeroed(anchor, Direction::Reverse, GridKind::Bulk, lo, anchor);
    let (w, h) = (g.width, g.height);
    for j in (0..h).rev() {
        let y = lo.y + j as i64;
        for i in (0..w).rev() {
            let p = Point::new(lo.x + i as i64, y);
            let k = j * w + i;
            let next = match (i == w - 1, j == h - 1) {
                (true, true) => 0,
                (false, true) => g.values[k + 1],
                (true, false) => g.values[k + w],
                (false, false) => g.values[k + 1].max(g.values[k + w]),
            };
            g.values[k] = next + i64::from(field.weight(p));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{reflect_field, WeightField};

    fn two_by_two() -> WeightField {
        WeightField::from_rows(Point::ORIGIN, 2, 2, vec![1, 0, 2, 1]).unwrap()
    }

    #[test]
    fn single_site_is_its_weight() {
        let f = WeightField::constant(Point::new(3, 4), 1, 1, 7).unwrap();
        let g = bulk_passage_forward(&f, Point::new(3, 4)).unwrap();
        assert_eq!(g.value(Point::new(3, 4)), 7);
    }

    #[test]
    fn horizontal_segment_sums_row() {
        let f = WeightField::from_rows(Point::ORIGIN, 4, 1, vec![3, 1, 4, 1]).unwrap();
        let g = bulk_passage_forward(&f, Point::ORIGIN).unwrap();
        assert_eq!(g.value(Point::new(3, 0)), 9);
    }

    #[test]
    fn two_by_two_enumeration() {
        let f = two_by_two();
        // paths: (0,0)(1,0)(1,1) = 2 and (0,0)(0,1)(1,1) = 4
        let g = bulk_passage_forward(&f, Point::ORIGIN).unwrap();
        assert_eq!(g.value(Point::new(1, 1)), 4);
        let r = bulk_passage_reverse(&f, Point::new(1, 1)).unwrap();
        assert_eq!(r.value(Point::ORIGIN), 4);
        assert_eq!(r.value(Point::new(1, 1)), 1);
    }

    #[test]
    fn reverse_is_forward_on_reflection() {
        let mut s = crate::RngStream::new(11, 0);
        let f = crate::sampling::sample_weight_field(&mut s, Point::new(-2, -3), 7, 6, 0.4).unwrap();
        let a = Point::new(3, 1);
        let rev = bulk_passage_reverse(&f, a).unwrap();
        let refl = reflect_field(&f);
        let fwd = bulk_passage_forward_to(&refl, -a, -f.lo()).unwrap();
        for y in f.lo().y..=a.y {
            for x in f.lo().x..=a.x {
                let p = Point::new(x, y);
                assert_eq!(rev.value(p), fwd.value(-p));
            }
        }
    }

    #[test]
    fn anchor_outside_is_an_error() {
        let f = two_by_two();
        assert!(bulk_passage_forward(&f, Point::new(2, 0)).is_err());
        assert!(bulk_passage_reverse(&f, Point::new(-1, 0)).is_err());
    }
}
