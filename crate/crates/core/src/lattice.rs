use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A site of `Z^2`. Ordering `u <= v` in the LPP sense is [`Point::le`],
/// which is componentwise; it is deliberately not `PartialOrd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };
    pub const E1: Point = Point { x: 1, y: 0 };
    pub const E2: Point = Point { x: 0, y: 1 };

    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    /// Componentwise `self <= other`.
    pub fn le(self, other: Point) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn l1(self) -> i64 {
        self.x.abs() + self.y.abs()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point::new(x, y)
    }
}

/// Axis selector for increments and exit extremes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    E1,
    E2,
}

impl Axis {
    pub fn unit(self) -> Point {
        match self {
            Axis::E1 => Point::E1,
            Axis::E2 => Point::E2,
        }
    }
}
