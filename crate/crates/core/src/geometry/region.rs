//! Visibility polygons with exact rational window points.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::polygon::{Location, PolygonWithHoles};
use super::predicates::{angle_cmp, cross_vec, on_segment, orientation, Orientation, Point, Segment};
use crate::error::{Error, Result};

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl QPoint {
    pub fn from_point(p: Point) -> Self {
        QPoint {
            x: BigRational::from_integer(BigInt::from(p.x)),
            y: BigRational::from_integer(BigInt::from(p.y)),
        }
    }

    /// `p + d * (num / den)`.
    fn along(p: Point, d: Point, num: i128, den: i128) -> Self {
        let t = BigRational::new(BigInt::from(num), BigInt::from(den));
        let q = QPoint::from_point(p);
        QPoint {
            x: q.x + BigRational::from_integer(BigInt::from(d.x)) * &t,
            y: q.y + BigRational::from_integer(BigInt::from(d.y)) * t,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// The grid point, when both coordinates are integers that fit.
    pub fn to_point(&self) -> Option<Point> {
        if !self.is_integer() {
            return None;
        }
        let x: i64 = self.x.to_integer().try_into().ok()?;
        let y: i64 = self.y.to_integer().try_into().ok()?;
        Some(Point::new(x, y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

fn qcross(o: &QPoint, a: &QPoint, b: &QPoint) -> BigRational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

fn q_on_segment(p: &QPoint, a: &QPoint, b: &QPoint) -> bool {
    qcross(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Crossing-number test against a rational ring; boundary counts as inside.
fn q_ring_contains(ring: &[QPoint], p: &QPoint) -> bool {
    let n = ring.len();
    if n == 0 {
        return false;
    }
    if n < 3 {
        return ring
            .iter()
            .zip(ring.iter().cycle().skip(1))
            .any(|(a, b)| q_on_segment(p, a, b));
    }
    let mut inside = false;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        let c = qcross(a, b, p);
        if c.is_zero() && q_on_segment(p, a, b) {
            return true;
        }
        let up = a.y <= p.y && p.y < b.y && c.is_positive();
        let down = b.y <= p.y && p.y < a.y && c.is_negative();
        if up || down {
            inside = !inside;
        }
    }
    inside
}

/// Closed half-plane on the `keep` side of the directed line `a -> b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cut {
    a: Point,
    b: Point,
    keep: Orientation,
}

impl Cut {
    fn admits(&self, q: Point) -> bool {
        let o = orientation(self.a, self.b, q);
        o == Orientation::Collinear || o == self.keep
    }

    fn side_value(&self, q: &QPoint) -> BigRational {
        let v = qcross(&QPoint::from_point(self.a), &QPoint::from_point(self.b), q);
        match self.keep {
            Orientation::Right => -v,
            _ => v,
        }
    }
}

/// Region of points seen from `apex`, possibly cropped by chords.
///
/// `boundary` is the outline of the region. Membership is evaluated against
/// the uncropped ring and the crop half-planes, so a crop that splits the
/// region into several pieces still classifies every point exactly.
#[derive(Debug, Clone)]
pub struct VisibilityRegion {
    pub apex: Point,
    pub boundary: Vec<QPoint>,
    source: Vec<QPoint>,
    cuts: Vec<Cut>,
}

impl VisibilityRegion {
    pub fn contains(&self, q: Point) -> bool {
        self.cuts.iter().all(|c| c.admits(q)) && q_ring_contains(&self.source, &QPoint::from_point(q))
    }

    pub fn is_cropped(&self) -> bool {
        !self.cuts.is_empty()
    }

    /// Window points of the outline that are not grid points.
    pub fn window_count(&self) -> usize {
        self.boundary.iter().filter(|q| !q.is_integer()).count()
    }
}

/// True when `r` lies strictly inside the counter-clockwise sweep from
/// `from` to `to`.
fn ccw_strictly_between(from: Point, to: Point, r: Point) -> bool {
    let key = |v: Point| -> (u8, Point) {
        let c = cross_vec(from, v);
        let half = if c > 0 || (c == 0 && super::predicates::dot_vec(from, v) > 0) { 0 } else { 1 };
        (half, v)
    };
    let (hr, _) = key(r);
    let (ht, _) = key(to);
    let rel = hr.cmp(&ht).then_with(|| 0.cmp(&cross_vec(r, to)));
    let zero = cross_vec(from, r) == 0 && super::predicates::dot_vec(from, r) > 0;
    !zero && rel == Ordering::Less
}

/// Whether the open ray from `p` along `r` starts inside the polygon.
/// `r` must not point at a vertex.
fn ray_enters(poly: &PolygonWithHoles, p: Point, r: Point) -> bool {
    if let Some(i) = poly.vertex_index(p) {
        let a = poly.vertex(poly.prev(i)).sub(p);
        let b = poly.vertex(poly.next(i)).sub(p);
        return ccw_strictly_between(b, a, r);
    }
    for (u, v) in poly.edges() {
        let (pu, pv) = (poly.vertex(u), poly.vertex(v));
        if on_segment(p, pu, pv) {
            return cross_vec(pv.sub(pu), r) > 0;
        }
    }
    true
}

/// Ray `p + t r` against segment `uv`: returns `t = num / den` with `den > 0`
/// when the ray meets the segment at `t > 0`.
fn ray_hit(p: Point, r: Point, u: Point, v: Point) -> Option<(i128, i128)> {
    let e = v.sub(u);
    let den = cross_vec(r, e);
    if den == 0 {
        return None;
    }
    let w = u.sub(p);
    let mut tn = cross_vec(w, e);
    let mut sn = cross_vec(w, r);
    let mut d = den;
    if d < 0 {
        tn = -tn;
        sn = -sn;
        d = -d;
    }
    (tn > 0 && sn >= 0 && sn <= d).then_some((tn, d))
}

/// Parameter of the intersection between the ray `p + t d` and the line
/// through `u, v`.
fn line_param(p: Point, d: Point, u: Point, v: Point) -> (i128, i128) {
    let e = v.sub(u);
    let den = cross_vec(d, e);
    let tn = cross_vec(u.sub(p), e);
    if den < 0 {
        (-tn, -den)
    } else {
        (tn, den)
    }
}

/// Visibility polygon of `p` computed by an angular sweep over the vertex
/// directions. Each angular interval between consecutive directions is closed
/// by the nearest side hit along an interior ray.
pub fn visibility_polygon(poly: &PolygonWithHoles, p: Point) -> Result<VisibilityRegion> {
    if poly.locate(p) == Location::Exterior {
        return Err(Error::invalid(format!("apex {p} lies outside the polygon")));
    }
    let mut dirs: Vec<Point> = poly
        .vertices()
        .iter()
        .filter(|&&v| v != p)
        .map(|&v| v.sub(p))
        .collect();
    dirs.sort_by(|a, b| angle_cmp(*a, *b));
    dirs.dedup_by(|a, b| angle_cmp(*a, *b) == Ordering::Equal);

    let edges = poly.edges();
    let m = dirs.len();
    let mut ring: Vec<QPoint> = Vec::new();
    let apex = QPoint::from_point(p);
    let push = |ring: &mut Vec<QPoint>, q: QPoint| {
        if ring.last() != Some(&q) {
            ring.push(q);
        }
    };
    for i in 0..m {
        let d0 = dirs[i];
        let d1 = dirs[(i + 1) % m];
        let r = if m > 1 && cross_vec(d0, d1) > 0 {
            d0.add(d1)
        } else {
            Point::new(-d0.y, d0.x)
        };
        if !ray_enters(poly, p, r) {
            push(&mut ring, apex.clone());
            continue;
        }
        let mut best: Option<(i128, i128, usize)> = None;
        for (k, &(u, v)) in edges.iter().enumerate() {
            let (pu, pv) = (poly.vertex(u), poly.vertex(v));
            if let Some((tn, td)) = ray_hit(p, r, pu, pv) {
                let closer = match best {
                    None => true,
                    Some((bn, bd, _)) => tn * bd < bn * td,
                };
                if closer {
                    best = Some((tn, td, k));
                }
            }
        }
        let (_, _, k) = best.ok_or_else(|| Error::Internal(format!("ray from {p} escapes")))?;
        let (u, v) = edges[k];
        let (pu, pv) = (poly.vertex(u), poly.vertex(v));
        let (an, ad) = line_param(p, d0, pu, pv);
        let (bn, bd) = line_param(p, d1, pu, pv);
        push(&mut ring, QPoint::along(p, d0, an, ad));
        push(&mut ring, QPoint::along(p, d1, bn, bd));
    }
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    Ok(VisibilityRegion {
        apex: p,
        boundary: ring.clone(),
        source: ring,
        cuts: Vec::new(),
    })
}

/// Polygon vertices on the boundary of the visibility polygon of `p`, in
/// boundary order. Dropping every non-vertex point of the boundary and
/// joining its neighbours leaves exactly this sequence.
pub fn vertex_limited_vp(poly: &PolygonWithHoles, p: Point) -> Result<Vec<usize>> {
    let vp = visibility_polygon(poly, p)?;
    let visible: Vec<usize> = (0..poly.n())
        .filter(|&i| poly.sees(p, poly.vertex(i)))
        .collect();
    let ring = &vp.source;
    let mut out: Vec<usize> = Vec::new();
    for i in 0..ring.len() {
        let a = &ring[i];
        let b = &ring[(i + 1) % ring.len()];
        let mut on: Vec<(BigRational, usize)> = visible
            .iter()
            .filter_map(|&v| {
                let q = QPoint::from_point(poly.vertex(v));
                if q_on_segment(&q, a, b) && q != *b {
                    let dx = &q.x - &a.x;
                    let dy = &q.y - &a.y;
                    Some((dx.clone() * dx + dy.clone() * dy, v))
                } else {
                    None
                }
            })
            .collect();
        on.sort();
        for (_, v) in on {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Portion of `vp` on the closed side of the chord `s` that does not
/// contain `p`.
pub fn crop(vp: &VisibilityRegion, s: Segment, p: Point) -> Result<VisibilityRegion> {
    if s.is_degenerate() {
        return Err(Error::invalid("crop chord is degenerate"));
    }
    let keep = match orientation(s.a, s.b, p) {
        Orientation::Left => Orientation::Right,
        Orientation::Right => Orientation::Left,
        Orientation::Collinear => {
            return Err(Error::invalid(format!("reference point {p} lies on the crop chord")))
        }
    };
    let cut = Cut { a: s.a, b: s.b, keep };
    let boundary = clip(&vp.boundary, &cut);
    let mut cuts = vp.cuts.clone();
    cuts.push(cut);
    Ok(VisibilityRegion {
        apex: vp.apex,
        boundary,
        source: vp.source.clone(),
        cuts,
    })
}

/// Sutherland-Hodgman against a single closed half-plane.
fn clip(ring: &[QPoint], cut: &Cut) -> Vec<QPoint> {
    let n = ring.len();
    let mut out: Vec<QPoint> = Vec::new();
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        let fa = cut.side_value(a);
        let fb = cut.side_value(b);
        let ina = !fa.is_negative();
        let inb = !fb.is_negative();
        if ina {
            out.push(a.clone());
        }
        if ina != inb && !fa.is_zero() && !fb.is_zero() {
            let t = &fa / (&fa - &fb);
            out.push(QPoint {
                x: &a.x + (&b.x - &a.x) * &t,
                y: &a.y + (&b.y - &a.y) * &t,
            });
        }
    }
    out.dedup();
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn sq() -> PolygonWithHoles {
        PolygonWithHoles::new(pts(&[(0, 0), (10, 0), (10, 10), (0, 10)]), vec![]).unwrap()
    }

    fn sqh() -> PolygonWithHoles {
        PolygonWithHoles::new(
            pts(&[(0, 0), (10, 0), (10, 10), (0, 10)]),
            vec![pts(&[(4, 4), (6, 4), (6, 6), (4, 6)])],
        )
        .unwrap()
    }

    fn grid(lo: i64, hi: i64) -> impl Iterator<Item = Point> {
        (lo..=hi).flat_map(move |x| (lo..=hi).map(move |y| Point::new(x, y)))
    }

    #[test]
    fn convex_polygon_sees_everything() {
        for apex in [Point::new(5, 5), Point::new(0, 0), Point::new(3, 0)] {
            let vp = visibility_polygon(&sq(), apex).unwrap();
            for q in grid(0, 10) {
                assert!(vp.contains(q), "{q} from {apex}");
            }
            assert!(!vp.contains(Point::new(11, 5)));
            assert_eq!(vp.window_count(), 0);
        }
    }

    #[test]
    fn shadow_behind_hole_matches_pointwise_visibility() {
        let poly = sqh();
        let vp = visibility_polygon(&poly, Point::new(2, 5)).unwrap();
        for q in grid(0, 10).filter(|q| poly.contains(*q)) {
            assert_eq!(vp.contains(q), poly.sees(Point::new(2, 5), q), "{q}");
        }
        assert!(vp.window_count() > 0);
    }

    #[test]
    fn vertex_limited_examples() {
        assert_eq!(vertex_limited_vp(&sq(), Point::new(5, 5)).unwrap().len(), 4);
        let mut corners = vertex_limited_vp(&sq(), Point::new(0, 0)).unwrap();
        corners.sort();
        assert_eq!(corners, vec![0, 1, 2, 3]);

        let poly = sqh();
        let got = vertex_limited_vp(&poly, Point::new(2, 5)).unwrap();
        let mut expected: Vec<usize> =
            (0..poly.n()).filter(|&i| poly.sees(Point::new(2, 5), poly.vertex(i))).collect();
        let mut sorted = got.clone();
        sorted.sort();
        expected.sort();
        assert_eq!(sorted, expected);
        // the far hole corners are hidden
        assert!(!got.contains(&poly.vertex_index(Point::new(6, 4)).unwrap()));
    }

    #[test]
    fn crop_axis_split() {
        let vp = visibility_polygon(&sq(), Point::new(5, 5)).unwrap();
        let s = Segment::new(Point::new(5, 0), Point::new(5, 10));
        let c = crop(&vp, s, Point::new(2, 5)).unwrap();
        for q in grid(0, 10) {
            assert_eq!(c.contains(q), q.x >= 5, "{q}");
        }
        assert!(crop(&vp, s, Point::new(5, 3)).is_err());
    }

    #[test]
    fn crop_diagonal() {
        let vp = visibility_polygon(&sq(), Point::new(5, 5)).unwrap();
        let s = Segment::new(Point::new(0, 0), Point::new(10, 10));
        let c = crop(&vp, s, Point::new(1, 9)).unwrap();
        for q in grid(0, 10) {
            assert_eq!(c.contains(q), q.x >= q.y, "{q}");
        }
    }
}
