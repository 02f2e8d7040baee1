//! Proximity perception: agents read only sorted vertex and agent sequences.
//!
//! [`proximity_explore`] runs the centralized form of the exploration. Each
//! candidate triangle is accepted only after both new diagonals have been
//! validated by walking them from one end and stopping wherever the
//! vertex-limited view may change. Rounds are charged per visited point plus
//! a fixed wait for the guards' patrol.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{
    angle_dist_cmp, crop, cross, orientation, proper_intersection, visibility_polygon, Orientation, Point,
    PolygonWithHoles, Segment,
};
use crate::guards::{add_leaf, compute_cover, place_guards, GuardSet, TripletCover};
use crate::triangulation::{RootedTree, Triangle, Triangulation};

/// Rounds to reach the next point of a validation walk.
pub const C_STEP: usize = 2;

/// Rounds waited per validation while the guards patrol their vertices.
pub const PATROL_WAIT: usize = 5;

/// Output of one Look under proximity perception. Vertices are given by
/// index, agents by id; no coordinates are exposed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CombinatorialView {
    pub vertex_seq: Vec<usize>,
    pub agent_seq: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RoundCost {
    pub validations: usize,
    pub validation_steps: usize,
    pub wait_rounds: usize,
    pub total_estimated_rounds: usize,
}

impl RoundCost {
    fn charge(&mut self, steps: usize) {
        self.validations += 1;
        self.validation_steps += steps;
        self.wait_rounds += PATROL_WAIT;
        self.total_estimated_rounds = self.validation_steps * C_STEP + self.wait_rounds;
    }
}

fn view_order(o: Point, a: Point, b: Point) -> Ordering {
    match (a == o, b == o) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => angle_dist_cmp(a.sub(o), b.sub(o)),
    }
}

/// The view from `observer`, measuring angles counter-clockwise from +x.
/// Agents standing on the observer come first; the observer's own vertex,
/// if any, is left out.
pub fn look_view(poly: &PolygonWithHoles, observer: Point, agents: &[(u64, Point)]) -> Result<CombinatorialView> {
    if !poly.contains(observer) {
        return Err(Error::invalid(format!("observer {observer} is outside the polygon")));
    }
    let mut vertex_seq = poly.visible_vertices(observer);
    vertex_seq.sort_by(|&i, &j| view_order(observer, poly.vertex(i), poly.vertex(j)));
    let mut seen: Vec<(u64, Point)> = agents.iter().copied().filter(|&(_, p)| poly.sees(observer, p)).collect();
    seen.sort_by(|a, b| view_order(observer, a.1, b.1).then(a.0.cmp(&b.0)));
    Ok(CombinatorialView { vertex_seq, agent_seq: seen.into_iter().map(|a| a.0).collect() })
}

/// Position along `u v` of its crossing with `a b`, as a fraction
/// `(num, den)` with `den > 0`, when the two meet at a single point strictly
/// between `u` and `v`.
fn crossing_param(u: Point, v: Point, a: Point, b: Point) -> Option<(i128, i128)> {
    let d = v.sub(u);
    let e = b.sub(a);
    let den = crate::geometry::cross_vec(d, e);
    if den == 0 {
        return None;
    }
    let mut t = crate::geometry::cross_vec(a.sub(u), e);
    let mut s = crate::geometry::cross_vec(a.sub(u), d);
    let mut den = den;
    if den < 0 {
        den = -den;
        t = -t;
        s = -s;
    }
    if t <= 0 || t >= den || s < 0 || s > den {
        return None;
    }
    let g = num_integer::gcd(t, den);
    Some((t / g, den / g))
}

/// Walks `u v` and reports whether it properly crosses an edge of `built`,
/// along with the number of points where the view may change.
///
/// The candidate change points are the crossings of `u v` with chords
/// between mutually visible vertices. Every built edge is such a chord, so a
/// crossing shows up at one of the visited points.
pub fn validate_diagonal(
    poly: &PolygonWithHoles,
    built: &[(usize, usize)],
    u: usize,
    v: usize,
) -> Result<(bool, usize)> {
    validate_with(poly, &poly.vertex_visibility_pairs(), built, u, v)
}

fn validate_with(
    poly: &PolygonWithHoles,
    chords: &[(usize, usize)],
    built: &[(usize, usize)],
    u: usize,
    v: usize,
) -> Result<(bool, usize)> {
    let (pu, pv) = (poly.vertex(u), poly.vertex(v));
    if u == v || !poly.sees(pu, pv) {
        return Err(Error::invalid(format!("vertices {u} and {v} do not see each other")));
    }
    let mut points: Vec<(i128, i128)> = chords
        .iter()
        .filter_map(|&(a, b)| crossing_param(pu, pv, poly.vertex(a), poly.vertex(b)))
        .collect();
    points.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    points.dedup();
    let crossed_at = |&(t, den): &(i128, i128)| {
        built.iter().any(|&(a, b)| {
            let (pa, pb) = (poly.vertex(a), poly.vertex(b));
            crossing_param(pu, pv, pa, pb) == Some((t, den))
                && cross(pu, pv, pa) != 0
                && cross(pu, pv, pb) != 0
        })
    };
    let valid = !points.iter().any(crossed_at);
    let brute = !built.iter().any(|&(a, b)| {
        proper_intersection(&Segment::new(pu, pv), &Segment::new(poly.vertex(a), poly.vertex(b)))
    });
    assert_eq!(valid, brute, "walk and direct test disagree on {u}-{v}");
    Ok((valid, points.len()))
}

/// One step of an exploration log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProxEvent {
    Triangle { id: usize, v: [usize; 3], parent: usize, calls: usize },
    Validate { u: usize, v: usize, valid: bool, steps: usize },
    Back { from: usize, to: usize },
}

#[derive(Debug, Clone)]
pub struct ProximityRun {
    /// Triangles in creation order; node `i` of the tree is triangle `i`.
    pub triangulation: Triangulation,
    pub tree: RootedTree,
    pub cover: TripletCover,
    pub guards: GuardSet,
    pub cost: RoundCost,
    pub events: Vec<ProxEvent>,
}

impl ProximityRun {
    pub fn to_text(&self, poly: &PolygonWithHoles) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "PROX 1");
        let _ = writeln!(s, "polygon {}", crate::io::polygon_hash(poly));
        for e in &self.events {
            let _ = match e {
                ProxEvent::Triangle { id, v, parent, calls } => {
                    writeln!(s, "TRI {id} {} {} {} parent {parent} calls {calls}", v[0], v[1], v[2])
                }
                ProxEvent::Validate { u, v, valid, steps } => {
                    writeln!(s, "VALIDATE {u} {v} {} steps {steps}", if *valid { "ok" } else { "cross" })
                }
                ProxEvent::Back { from, to } => writeln!(s, "BACK {from} {to}"),
            };
        }
        for g in self.guards.points(poly) {
            let _ = writeln!(s, "GUARD {} {}", g.x, g.y);
        }
        let c = &self.cost;
        let _ = writeln!(
            s,
            "END validations {} steps {} waits {} rounds {}",
            c.validations, c.validation_steps, c.wait_rounds, c.total_estimated_rounds
        );
        s
    }
}

/// Triangle vertex slots: slot `s` is the edge `v[s] -> v[s + 1]`, slot 0
/// faces the parent.
struct Node {
    v: [usize; 3],
    parent: usize,
    cursor: usize,
}

/// Whether `a b c` contains no polygon vertex other than its corners.
fn empty_triangle(poly: &PolygonWithHoles, a: usize, b: usize, c: usize) -> bool {
    let (pa, pb, pc) = (poly.vertex(a), poly.vertex(b), poly.vertex(c));
    let s = cross(pa, pb, pc).signum();
    s != 0
        && !(0..poly.n()).any(|w| {
            let pw = poly.vertex(w);
            w != a
                && w != b
                && w != c
                && cross(pa, pb, pw) * s >= 0
                && cross(pb, pc, pw) * s >= 0
                && cross(pc, pa, pw) * s >= 0
        })
}

/// Depth-first exploration building a triangulation and a cooperative guard
/// set together, starting from the first side of the outer ring.
pub fn proximity_explore(poly: &PolygonWithHoles) -> Result<ProximityRun> {
    let chords = poly.vertex_visibility_pairs();
    let mut cost = RoundCost::default();
    let mut events = Vec::new();
    let mut built: Vec<(usize, usize)> = Vec::new();
    let mut nodes: Vec<Node> = Vec::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    let add_edges = |built: &mut Vec<(usize, usize)>, t: [usize; 3]| {
        for s in 0..3 {
            let e = key(t[s], t[(s + 1) % 3]);
            if !built.contains(&e) {
                built.push(e);
            }
        }
    };

    let mut validate = |built: &[(usize, usize)], events: &mut Vec<ProxEvent>, a: usize, b: usize| -> Result<bool> {
        let (valid, steps) = validate_with(poly, &chords, built, a, b)?;
        cost.charge(steps);
        events.push(ProxEvent::Validate { u: a, v: b, valid, steps });
        Ok(valid)
    };

    // Candidates from `u` across the chord `u v`, away from `w`, in view order.
    let candidates = |u: usize, v: usize, w: usize| -> Result<Vec<usize>> {
        let pu = poly.vertex(u);
        let vp = visibility_polygon(poly, pu)?;
        let region = crop(&vp, Segment::new(pu, poly.vertex(v)), poly.vertex(w))?;
        let view = look_view(poly, pu, &[])?;
        Ok(view
            .vertex_seq
            .into_iter()
            .filter(|&q| {
                let pq = poly.vertex(q);
                orientation(pu, poly.vertex(v), pq) != Orientation::Collinear && region.contains(pq)
            })
            .collect())
    };

    // Root: the first side of the outer ring and the first vertex on its left
    // that closes an empty triangle.
    let (u, v) = (0usize, poly.next(0));
    let pu = poly.vertex(u);
    let view = look_view(poly, pu, &[])?;
    let mut root = None;
    for q in view.vertex_seq {
        if orientation(pu, poly.vertex(v), poly.vertex(q)) != Orientation::Left || !empty_triangle(poly, u, v, q) {
            continue;
        }
        if validate(&built, &mut events, u, q)? && validate(&built, &mut events, v, q)? {
            root = Some(q);
            break;
        }
    }
    let q = root.ok_or_else(|| Error::Internal("no triangle on the first side".into()))?;
    let total = poly.triangle_count();
    let mut tree = RootedTree::single(0);
    let mut cover = compute_cover(&tree);
    add_edges(&mut built, [u, v, q]);
    nodes.push(Node { v: [u, v, q], parent: 0, cursor: 0 });
    let mut triangles = vec![Triangle::new(poly, u, v, q)];
    events.push(ProxEvent::Triangle { id: 0, v: [u, v, q], parent: 0, calls: 0 });

    let mut cur = 0usize;
    loop {
        let node = &mut nodes[cur];
        let mut slot = None;
        while node.cursor < 3 {
            let s = node.cursor;
            node.cursor += 1;
            let (a, b) = (node.v[s], node.v[(s + 1) % 3]);
            if (cur == 0 || s != 0) && !poly.is_side(a, b) {
                slot = Some(s);
                break;
            }
        }
        let Some(s) = slot else {
            if cur == 0 {
                break;
            }
            let p = nodes[cur].parent;
            events.push(ProxEvent::Back { from: cur, to: p });
            cur = p;
            continue;
        };
        let t = nodes[cur].v;
        let (a, b, w) = (t[s], t[(s + 1) % 3], t[(s + 2) % 3]);
        let mut found = None;
        for q in candidates(a, b, w)? {
            if !empty_triangle(poly, a, b, q) || !poly.sees(poly.vertex(b), poly.vertex(q)) {
                continue;
            }
            let mut tv = [a, b, q];
            tv.sort_unstable();
            if nodes.iter().any(|n| {
                let mut x = n.v;
                x.sort_unstable();
                x == tv
            }) {
                // the triangle across this edge exists already
                break;
            }
            if validate(&built, &mut events, a, q)? && validate(&built, &mut events, b, q)? {
                found = Some(q);
                break;
            }
        }
        let Some(q) = found else { continue };
        let id = nodes.len();
        if id >= total {
            return Err(Error::Internal("exploration produced too many triangles".into()));
        }
        add_edges(&mut built, [a, b, q]);
        nodes.push(Node { v: [a, b, q], parent: cur, cursor: 1 });
        triangles.push(Triangle::new(poly, a, b, q));
        let calls = add_leaf(&mut tree, &mut cover, cur, id)?;
        events.push(ProxEvent::Triangle { id, v: [a, b, q], parent: cur, calls });
        cur = id;
    }
    if nodes.len() != total {
        return Err(Error::Internal(format!("explored {} triangles, expected {total}", nodes.len())));
    }
    let mut diagonals: Vec<(usize, usize)> = built.into_iter().filter(|&(a, b)| !poly.is_side(a, b)).collect();
    diagonals.sort_unstable();
    let triangulation = Triangulation { triangles, diagonals };
    let guards = place_guards(&cover, &triangulation)?;
    Ok(ProximityRun { triangulation, tree, cover, guards, cost, events })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{square, square_with_hole, two_hole_example};
    use crate::geometry::vertex_limited_vp;
    use crate::triangulation::build_dual;
    use crate::verify::verify_guards;

    #[test]
    fn square_view_order() {
        let p = square();
        let v = look_view(&p, Point::new(5, 5), &[]).unwrap();
        let pts: Vec<Point> = v.vertex_seq.iter().map(|&i| p.vertex(i)).collect();
        assert_eq!(pts, [(10, 10), (0, 10), (0, 0), (10, 0)].map(Point::from));
        let a = look_view(&p, Point::new(5, 5), &[(7, Point::new(9, 1)), (3, Point::new(1, 1))]).unwrap();
        assert_eq!(a.agent_seq, vec![3, 7]);
    }

    #[test]
    fn shadowed_vertices_are_omitted() {
        let p = square_with_hole();
        let o = Point::new(2, 5);
        let mut got = look_view(&p, o, &[]).unwrap().vertex_seq;
        got.sort_unstable();
        let mut want = vertex_limited_vp(&p, o).unwrap();
        want.sort_unstable();
        assert_eq!(got, want);
        assert!(got.len() < p.n());
    }

    #[test]
    fn outside_observer_is_rejected() {
        assert!(look_view(&square(), Point::new(11, 5), &[]).is_err());
    }

    #[test]
    fn validate_square_diagonals() {
        let p = square();
        assert!(validate_diagonal(&p, &[], 0, 2).unwrap().0);
        assert!(!validate_diagonal(&p, &[(1, 3)], 0, 2).unwrap().0);
        // sharing an endpoint is not a crossing
        assert!(validate_diagonal(&p, &[(0, 1), (1, 2)], 0, 2).unwrap().0);
    }

    #[test]
    fn validate_counts_distinct_change_points() {
        let p = square_with_hole();
        let (valid, steps) = validate_diagonal(&p, &[(0, 4)], 0, 1).unwrap();
        assert!(valid);
        // brute force over all chords
        let (a, b) = (p.vertex(0), p.vertex(1));
        let mut ts = Vec::new();
        for (i, j) in p.vertex_visibility_pairs() {
            if let Some(t) = crossing_param(a, b, p.vertex(i), p.vertex(j)) {
                let f = t.0 as f64 / t.1 as f64;
                if !ts.iter().any(|&x: &f64| (x - f).abs() < 1e-12) {
                    ts.push(f);
                }
            }
        }
        assert_eq!(steps, ts.len());
    }

    #[test]
    fn validate_rejects_blocked_pairs() {
        let p = square_with_hole();
        assert!(validate_diagonal(&p, &[], 0, 2).is_err());
    }

    #[test]
    fn explore_square() {
        let p = square();
        let r = proximity_explore(&p).unwrap();
        assert_eq!(r.triangulation.len(), 2);
        assert_eq!(r.guards.len(), 1);
        assert!(r.cost.total_estimated_rounds < 100);
    }

    #[test]
    fn explore_polygons_with_holes() {
        for p in [square_with_hole(), two_hole_example()] {
            let r = proximity_explore(&p).unwrap();
            assert_eq!(r.triangulation.len(), p.triangle_count());
            let d = build_dual(&r.triangulation);
            assert_eq!(d.edge_count(), p.dual_edge_count());
            assert!(r.guards.len() <= p.guard_bound());
            assert!(verify_guards(&p, &r.guards.points(&p), 2000, 3).unwrap().passed());
            let c = r.cost;
            assert_eq!(c.total_estimated_rounds, c.validation_steps * C_STEP + c.wait_rounds);
            assert_eq!(c.wait_rounds, PATROL_WAIT * c.validations);
        }
    }
}
