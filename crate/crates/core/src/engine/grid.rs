use crate::lattice::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Values `G_{anchor, y}` for `y >= anchor`.
    Forward,
    /// Values `G_{x, anchor}` for `x <= anchor`.
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Bulk,
    SwBoundary,
    NeBoundary,
}

/// Dense table of passage values over the rectangle `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PassageGrid {
    pub(crate) anchor: Point,
    pub(crate) direction: Direction,
    pub(crate) kind: GridKind,
    pub(crate) lo: Point,
    pub(crate) width: usize,
    pub(crate) height: usize,
    pub(crate) values: Vec<i64>,
}

impl PassageGrid {
    pub(crate) fn zeroed(anchor: Point, direction: Direction, kind: GridKind, lo: Point, hi: Point) -> Self {
        let width = (hi.x - lo.x + 1) as usize;
        let height = (hi.y - lo.y + 1) as usize;
        PassageGrid {
            anchor,
            direction,
            kind,
            lo,
            width,
            height,
            values: vec![0; width * height],
        }
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.lo + Point::new(self.width as i64 - 1, self.height as i64 - 1)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn contains(&self, p: Point) -> bool {
        self.lo.le(p) && p.le(self.hi())
    }

    /// Row-major values starting at `lo`.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub(crate) fn idx(&self, p: Point) -> usize {
        (p.y - self.lo.y) as usize * self.width + (p.x - self.lo.x) as usize
    }

    pub fn get(&self, p: Point) -> Option<i64> {
        if self.contains(p) {
            Some(self.values[self.idx(p)])
        } else {
            None
        }
    }

    /// Value at `p`. Panics outside the table.
    pub fn value(&self, p: Point) -> i64 {
        match self.get(p) {
            Some(v) => v,
            None => panic!("site {p} outside passage grid [{}, {}]", self.lo, self.hi()),
        }
    }
}
