use super::grid::{Direction, PassageGrid};
use crate::error::{param, Result};
use crate::lattice::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TieRule {
    /// Prefer `e1` on ties: the rightmost (lowest) geodesic.
    Rightmost,
    /// Prefer `e2` on ties: the upmost geodesic.
    Upmost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesic {
    pub vertices: Vec<Point>,
    pub tie_rule: TieRule,
}

impl Geodesic {
    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().expect("geodesic has at least one vertex")
    }

    /// Sum of `weight` over the vertices.
    pub fn weight_with(&self, mut weight: impl FnMut(Point) -> u32) -> i64 {
        self.vertices.iter().map(|&p| i64::from(weight(p))).sum()
    }

    /// True when, on every anti-diagonal, this path's vertex is at least as
    /// far right as `other`'s. Both paths must share their endpoints.
    pub fn weakly_right_of(&self, other: &Geodesic) -> bool {
        self.vertices.len() == other.vertices.len()
            && self.vertices.iter().zip(&other.vertices).all(|(a, b)| a.x >= b.x)
    }
}

/// Walks forward from `from` to the grid's anchor, choosing at each step the
/// neighbour with the larger remaining passage time; ties go to `e1` under
/// [`TieRule::Rightmost`] and to `e2` under [`TieRule::Upmost`].
pub fn trace_geodesic(reverse_grid: &PassageGrid, from: Point, to: Point, tie_rule: TieRule) -> Result<Geodesic> {
    if reverse_grid.direction() != Direction::Reverse || reverse_grid.anchor() != to {
        return param(format!("geodesic to {to} needs a reverse grid anchored there"));
    }
    if !from.le(to) {
        return param(format!("{from} is not below-left of {to}"));
    }
    if !reverse_grid.contains(from) {
        return param(format!("{from} outside the reverse grid"));
    }
    let mut vertices = Vec::with_capacity((to - from).l1() as usize + 1);
    let mut z = from;
    vertices.push(z);
    while z != to {
        let step = if z.x == to.x {
            Point::E2
        } else if z.y == to.y {
            Point::E1
        } else {
            let right = reverse_grid.value(z + Point::E1);
            let up = reverse_grid.value(z + Point::E2);
            match right.cmp(&up) {
                std::cmp::Ordering::Greater => Point::E1,
                std::cmp::Ordering::Less => Point::E2,
                std::cmp::Ordering::Equal => match tie_rule {
                    TieRule::Rightmost => Point::E1,
                    TieRule::Upmost => Point::E2,
                },
            }
        };
        z = z + step;
        vertices.push(z);
    }
    Ok(Geodesic { vertices, tie_rule })
}

/// Whether some vertex lies on the vertical segment
/// `{center.x} x [center.y - half_length, center.y + half_length]`.
pub fn crosses_segment(g: &Geodesic, center: Point, half_length: f64) -> bool {
    g.vertices
        .iter()
        .any(|p| p.x == center.x && ((p.y - center.y) as f64).abs() <= half_length)
}

/// Smallest vertical distance, on the column `x1 = m`, between the path and
/// the straight segment from `u` to `v`. `None` if the path misses the column.
pub fn deviation_at_column(g: &Geodesic, u: Point, v: Point, m: i64) -> Option<f64> {
    let line = if v.x == u.x {
        u.y as f64
    } else {
        u.y as f64 + (v.y - u.y) as f64 / (v.x - u.x) as f64 * (m - u.x) as f64
    };
    g.vertices
        .iter()
        .filter(|p| p.x == m)
        .map(|p| (line - p.y as f64).abs())
        .min_by(|a, b| a.total_cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::bulk_passage_reverse;
    use crate::sampling::{WeightField, Weights};

    #[test]
    fn flat_rectangle_is_the_segment() {
        let f = WeightField::from_rows(Point::ORIGIN, 4, 1, vec![1, 0, 3, 2]).unwrap();
        let to = Point::new(3, 0);
        let r = bulk_passage_reverse(&f, to).unwrap();
        for rule in [TieRule::Rightmost, TieRule::Upmost] {
            let g = trace_geodesic(&r, Point::ORIGIN, to, rule).unwrap();
            assert_eq!(g.vertices, (0..4).map(|x| Point::new(x, 0)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn two_by_two_goes_through_upper_left() {
        let f = WeightField::from_rows(Point::ORIGIN, 2, 2, vec![1, 0, 2, 1]).unwrap();
        let to = Point::new(1, 1);
        let r = bulk_passage_reverse(&f, to).unwrap();
        let a = trace_geodesic(&r, Point::ORIGIN, to, TieRule::Rightmost).unwrap();
        let b = trace_geodesic(&r, Point::ORIGIN, to, TieRule::Upmost).unwrap();
        assert_eq!(a, Geodesic { vertices: b.vertices.clone(), tie_rule: TieRule::Rightmost });
        assert_eq!(a.vertices[1], Point::new(0, 1));
        assert_eq!(a.weight_with(|p| f.weight(p)), 4);
    }

    #[test]
    fn constant_field_tie_rules() {
        let f = WeightField::constant(Point::ORIGIN, 3, 3, 1).unwrap();
        let to = Point::new(2, 2);
        let r = bulk_passage_reverse(&f, to).unwrap();
        let low = trace_geodesic(&r, Point::ORIGIN, to, TieRule::Rightmost).unwrap();
        let high = trace_geodesic(&r, Point::ORIGIN, to, TieRule::Upmost).unwrap();
        assert_eq!(
            low.vertices,
            vec![(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)].into_iter().map(Point::from).collect::<Vec<_>>()
        );
        assert_eq!(high.vertices[2], Point::new(0, 2));
        assert!(low.weakly_right_of(&high));
        assert!(!high.weakly_right_of(&low));
    }

    #[test]
    fn segment_queries() {
        let f = WeightField::constant(Point::ORIGIN, 3, 3, 1).unwrap();
        let to = Point::new(2, 2);
        let r = bulk_passage_reverse(&f, to).unwrap();
        let g = trace_geodesic(&r, Point::ORIGIN, to, TieRule::Rightmost).unwrap();
        assert!(crosses_segment(&g, Point::ORIGIN, 0.0));
        assert!(!crosses_segment(&g, Point::new(-1, 0), 10.0));
        assert!(!crosses_segment(&g, Point::new(1, 2), 1.5));
        assert_eq!(deviation_at_column(&g, Point::ORIGIN, to, 1), Some(1.0));
        assert!(trace_geodesic(&r, Point::new(2, 2), Point::new(1, 1), TieRule::Upmost).is_err());
    }
}
