//! Exact integer predicates. Every test reduces to the sign of a cross
//! product evaluated in `i128`, so no tolerance is ever involved.

use std::cmp::Ordering;
use std::fmt;

/// Largest admissible grid coordinate.
pub const N_MAX: i64 = 1 << 24;

/// A grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, k: i64) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn norm2(self) -> i128 {
        let (x, y) = (self.x as i128, self.y as i128);
        x * x + y * y
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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Orientation {
    fn from_sign(v: i128) -> Self {
        match v.cmp(&0) {
            Ordering::Greater => Orientation::Left,
            Ordering::Less => Orientation::Right,
            Ordering::Equal => Orientation::Collinear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

#[inline]
pub fn cross(o: Point, a: Point, b: Point) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

#[inline]
pub fn cross_vec(a: Point, b: Point) -> i128 {
    a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128
}

#[inline]
pub fn dot_vec(a: Point, b: Point) -> i128 {
    a.x as i128 * b.x as i128 + a.y as i128 * b.y as i128
}

/// Turn made by `p -> q -> r`.
pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    Orientation::from_sign(cross(p, q, r))
}

/// `p` lies on the closed segment `ab`.
pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    cross(a, b, p) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// `p` lies on segment `ab` but is not one of its endpoints.
pub fn strictly_on_segment(p: Point, a: Point, b: Point) -> bool {
    p != a && p != b && on_segment(p, a, b)
}

/// The two segments cross at a single point interior to both.
/// Touching at an endpoint and collinear overlap do not count.
pub fn proper_intersection(s: &Segment, t: &Segment) -> bool {
    let d1 = cross(s.a, s.b, t.a).signum();
    let d2 = cross(s.a, s.b, t.b).signum();
    let d3 = cross(t.a, t.b, s.a).signum();
    let d4 = cross(t.a, t.b, s.b).signum();
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Closed segments share at least one point.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    if proper_intersection(s, t) {
        return true;
    }
    on_segment(t.a, s.a, s.b)
        || on_segment(t.b, s.a, s.b)
        || on_segment(s.a, t.a, t.b)
        || on_segment(s.b, t.a, t.b)
}

fn half(v: Point) -> u8 {
    if v.y > 0 || (v.y == 0 && v.x > 0) {
        0
    } else {
        1
    }
}

/// Orders non-zero direction vectors by counter-clockwise angle from +x,
/// in `[0, 2pi)`.
pub fn angle_cmp(a: Point, b: Point) -> Ordering {
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&cross_vec(a, b)))
}

/// Angle first, then distance from the origin of the vectors.
pub fn angle_dist_cmp(a: Point, b: Point) -> Ordering {
    angle_cmp(a, b).then_with(|| a.norm2().cmp(&b.norm2()))
}

/// Twice the signed area of a ring (positive for counter-clockwise).
pub fn signed_area2(ring: &[Point]) -> i128 {
    let n = ring.len();
    (0..n)
        .map(|i| cross_vec(ring[i], ring[(i + 1) % n]))
        .sum()
}
