use std::collections::HashMap;

use super::predicates::{
    cross, on_segment, orientation, proper_intersection, segments_intersect, signed_area2,
    strictly_on_segment, Orientation, Point, Segment, N_MAX,
};
use crate::error::{Error, Result};

/// Where a point sits relative to a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// A polygon with holes on the integer grid.
///
/// Vertices are indexed globally: the outer ring first, then each hole in
/// order. The outer ring is stored counter-clockwise and holes clockwise, so
/// walking any ring in storage order keeps the polygon interior on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonWithHoles {
    vertices: Vec<Point>,
    /// `ring_bounds[r]..ring_bounds[r + 1]` are the indices of ring `r`.
    ring_bounds: Vec<usize>,
    ring_of: Vec<usize>,
    index: HashMap<Point, usize>,
}

impl PolygonWithHoles {
    /// Validates and normalizes the rings.
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self> {
        let mut rings = Vec::with_capacity(holes.len() + 1);
        rings.push(outer);
        rings.extend(holes);

        for (r, ring) in rings.iter().enumerate() {
            if ring.len() < 3 {
                return Err(Error::polygon(format!(
                    "ring {r} has {} vertices, at least 3 required",
                    ring.len()
                )));
            }
            for p in ring {
                if p.x < 0 || p.y < 0 || p.x > N_MAX || p.y > N_MAX {
                    return Err(Error::polygon(format!(
                        "vertex {p} outside the grid [0, {N_MAX}]"
                    )));
                }
            }
            if signed_area2(ring) == 0 {
                return Err(Error::polygon(format!("ring {r} has zero area")));
            }
        }

        let poly = Self::build(rings);
        poly.validate()?;
        Ok(poly)
    }

    /// Builds without grid or simplicity checks; orientation is still normalized.
    pub(crate) fn build(mut rings: Vec<Vec<Point>>) -> Self {
        for (r, ring) in rings.iter_mut().enumerate() {
            let ccw = signed_area2(ring) > 0;
            if (r == 0) != ccw {
                ring.reverse();
            }
        }
        let mut vertices = Vec::new();
        let mut ring_bounds = vec![0];
        let mut ring_of = Vec::new();
        for (r, ring) in rings.into_iter().enumerate() {
            ring_of.extend(std::iter::repeat_n(r, ring.len()));
            vertices.extend(ring);
            ring_bounds.push(vertices.len());
        }
        let index = vertices.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        PolygonWithHoles {
            vertices,
            ring_bounds,
            ring_of,
            index,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.index.len() != self.vertices.len() {
            return Err(Error::polygon("vertices are not distinct"));
        }
        let edges = self.edges();
        for (i, &(a, b)) in edges.iter().enumerate() {
            let s = Segment::new(self.vertices[a], self.vertices[b]);
            for &(c, d) in &edges[i + 1..] {
                let t = Segment::new(self.vertices[c], self.vertices[d]);
                let bad = if b == c || a == d {
                    // consecutive sides may only share their common vertex
                    let (shared, x, y) = if b == c { (b, a, d) } else { (a, b, c) };
                    let ps = self.vertices[shared];
                    let px = self.vertices[x];
                    let py = self.vertices[y];
                    if a == d && b == c {
                        true
                    } else {
                        orientation(px, ps, py) == Orientation::Collinear
                            && (on_segment(px, ps, py) || on_segment(py, ps, px))
                    }
                } else {
                    segments_intersect(&s, &t)
                };
                if bad {
                    return Err(Error::polygon(format!(
                        "sides {} -> {} and {} -> {} intersect",
                        self.vertices[a], self.vertices[b], self.vertices[c], self.vertices[d]
                    )));
                }
            }
        }
        let outer = self.ring(0);
        for h in 1..self.ring_count() {
            let probe = self.ring(h)[0];
            if ring_locate(outer, probe.x as i128, probe.y as i128, 1) != Location::Interior {
                return Err(Error::polygon(format!(
                    "hole {} is not strictly inside the outer boundary",
                    h - 1
                )));
            }
            for g in 1..self.ring_count() {
                if g != h {
                    let q = self.ring(g)[0];
                    if ring_locate(self.ring(h), q.x as i128, q.y as i128, 1) != Location::Exterior
                    {
                        return Err(Error::polygon(format!(
                            "holes {} and {} are not disjoint",
                            h - 1,
                            g - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Hole count.
    pub fn h(&self) -> usize {
        self.ring_bounds.len() - 2
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i]
    }

    pub fn vertex_index(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn ring_count(&self) -> usize {
        self.ring_bounds.len() - 1
    }

    pub fn ring(&self, r: usize) -> &[Point] {
        &self.vertices[self.ring_bounds[r]..self.ring_bounds[r + 1]]
    }

    pub fn ring_range(&self, r: usize) -> std::ops::Range<usize> {
        self.ring_bounds[r]..self.ring_bounds[r + 1]
    }

    pub fn outer(&self) -> &[Point] {
        self.ring(0)
    }

    pub fn holes(&self) -> impl Iterator<Item = &[Point]> {
        (1..self.ring_count()).map(move |r| self.ring(r))
    }

    pub fn ring_of(&self, i: usize) -> usize {
        self.ring_of[i]
    }

    /// Successor of vertex `i` along its ring.
    pub fn next(&self, i: usize) -> usize {
        let r = self.ring_of[i];
        if i + 1 == self.ring_bounds[r + 1] {
            self.ring_bounds[r]
        } else {
            i + 1
        }
    }

    pub fn prev(&self, i: usize) -> usize {
        let r = self.ring_of[i];
        if i == self.ring_bounds[r] {
            self.ring_bounds[r + 1] - 1
        } else {
            i - 1
        }
    }

    /// Directed sides in ring order; the interior lies to the left of each.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).map(|i| (i, self.next(i))).collect()
    }

    pub fn is_side(&self, i: usize, j: usize) -> bool {
        self.next(i) == j || self.next(j) == i
    }

    /// Triangle count of any triangulation.
    pub fn triangle_count(&self) -> usize {
        self.n() + 2 * self.h() - 2
    }

    /// Dual-graph edge count of any triangulation.
    pub fn dual_edge_count(&self) -> usize {
        self.n() + 3 * self.h() - 3
    }

    /// Upper bound on the guard set size, `floor((n + 2h - 2) / 2)`.
    pub fn guard_bound(&self) -> usize {
        self.triangle_count() / 2
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Copy with every coordinate multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Self {
        let rings = (0..self.ring_count())
            .map(|r| self.ring(r).iter().map(|p| p.scale(k)).collect())
            .collect();
        Self::build(rings)
    }

    pub fn locate(&self, p: Point) -> Location {
        self.locate_frac(p.x as i128, p.y as i128, 1)
    }

    /// Locates the point `(x / den, y / den)`, `den > 0`.
    pub fn locate_frac(&self, x: i128, y: i128, den: i128) -> Location {
        match ring_locate(self.ring(0), x, y, den) {
            Location::Exterior => return Location::Exterior,
            Location::Boundary => return Location::Boundary,
            Location::Interior => {}
        }
        for r in 1..self.ring_count() {
            match ring_locate(self.ring(r), x, y, den) {
                Location::Interior => return Location::Exterior,
                Location::Boundary => return Location::Boundary,
                Location::Exterior => {}
            }
        }
        Location::Interior
    }

    pub fn contains(&self, p: Point) -> bool {
        self.locate(p) != Location::Exterior
    }

    /// Visibility between two points of the polygon.
    pub fn mutually_visible(&self, a: Point, b: Point) -> Result<bool> {
        for p in [a, b] {
            if self.locate(p) == Location::Exterior {
                return Err(Error::invalid(format!("point {p} lies outside the polygon")));
            }
        }
        Ok(self.sees(a, b))
    }

    /// Visibility test that assumes both endpoints lie in the polygon.
    ///
    /// The segment is rejected if it properly crosses a side. Otherwise it is
    /// cut at every vertex it passes through and each piece is classified by
    /// its midpoint: no piece touches the boundary in its relative interior
    /// except by running along it.
    pub fn sees(&self, a: Point, b: Point) -> bool {
        if a == b {
            return true;
        }
        let seg = Segment::new(a, b);
        let (lx, hx) = (a.x.min(b.x), a.x.max(b.x));
        let (ly, hy) = (a.y.min(b.y), a.y.max(b.y));
        let mut breaks = vec![a, b];
        for i in 0..self.n() {
            let u = self.vertices[i];
            let v = self.vertices[self.next(i)];
            if u.x.max(v.x) < lx || u.x.min(v.x) > hx || u.y.max(v.y) < ly || u.y.min(v.y) > hy {
                continue;
            }
            if proper_intersection(&seg, &Segment::new(u, v)) {
                return false;
            }
            if strictly_on_segment(u, a, b) {
                breaks.push(u);
            }
        }
        let d = b.sub(a);
        breaks.sort_by_key(|p| super::predicates::dot_vec(p.sub(a), d));
        breaks.windows(2).all(|w| {
            let (p, q) = (w[0], w[1]);
            self.locate_frac((p.x + q.x) as i128, (p.y + q.y) as i128, 2) != Location::Exterior
        })
    }

    /// All pairs `i < j` of mutually visible vertices.
    pub fn vertex_visibility_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.sees(self.vertices[i], self.vertices[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Indices of the vertices visible from `p`, ascending.
    pub fn visible_vertices(&self, p: Point) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.vertices[i] != p && self.sees(p, self.vertices[i]))
            .collect()
    }
}

/// Crossing-number classification against a single ring for the point
/// `(x / den, y / den)`.
pub(crate) fn ring_locate(ring: &[Point], x: i128, y: i128, den: i128) -> Location {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        let (ax, ay) = (a.x as i128 * den, a.y as i128 * den);
        let (bx, by) = (b.x as i128 * den, b.y as i128 * den);
        let c = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
        if c == 0 && x >= ax.min(bx) && x <= ax.max(bx) && y >= ay.min(by) && y <= ay.max(by) {
            return Location::Boundary;
        }
        if (ay <= y && y < by && c > 0) || (by <= y && y < ay && c < 0) {
            inside = !inside;
        }
    }
    if inside {
        Location::Interior
    } else {
        Location::Exterior
    }
}

/// Twice the area of triangle `abc`, signed.
pub fn triangle_area2(a: Point, b: Point, c: Point) -> i128 {
    cross(a, b, c)
}
