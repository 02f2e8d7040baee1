use guardwalk::gen::{comb, random_polygon, ring_of_holes};
use guardwalk::geometry::{Point, PolygonWithHoles};
use guardwalk::sim::{model_check, simulate_small_memory, simulate_warmup, SimConfig, SimOutcome};
use guardwalk::triangulation::triangulate;
use guardwalk::verify::verify_guards;

/// Scales by 3 so the centroid of the first triangle is a grid point.
fn with_interior_start(p: &PolygonWithHoles) -> (PolygonWithHoles, Point) {
    let q = p.scaled(3);
    let t = &triangulate(&q).unwrap().triangles[0];
    let s = t.v.iter().fold(Point::new(0, 0), |acc, &i| acc.add(q.vertex(i)));
    (q, Point::new(s.x / 3, s.y / 3))
}

fn check(p: &PolygonWithHoles, out: &SimOutcome) {
    model_check(&out.trace, p).unwrap();
    assert!(out.guards.len() <= p.guard_bound(), "{} guards over bound {}", out.guards.len(), p.guard_bound());
    let r = verify_guards(p, &out.guards.points(p), 1500, 11).unwrap();
    assert!(r.coverage.is_complete(), "{:?}", r.coverage);
    assert!(r.connectivity.connected);
}

fn family() -> Vec<PolygonWithHoles> {
    let mut v = vec![comb(3).unwrap(), comb(6).unwrap(), ring_of_holes(3).unwrap()];
    for (i, (n, h)) in [(8, 0), (12, 1), (16, 2), (24, 3), (30, 4)].into_iter().enumerate() {
        v.push(random_polygon(n, h, 100 + i as u64).unwrap());
    }
    v
}

#[test]
fn warmup_places_a_valid_guard_set() {
    for p in family() {
        let (q, start) = with_interior_start(&p);
        let cfg = SimConfig { agents: q.guard_bound().max(1), start, seed: 5 };
        let out = simulate_warmup(&q, &cfg).unwrap();
        check(&q, &out);
    }
}

#[test]
fn small_memory_places_a_valid_guard_set() {
    for p in family() {
        let (q, start) = with_interior_start(&p);
        let cfg = SimConfig { agents: q.triangle_count().div_ceil(2), start, seed: 5 };
        let out = simulate_small_memory(&q, &cfg).unwrap();
        check(&q, &out);
        assert!(out.trace.max_peak() <= out.trace.memory[0].budget);
    }
}

#[test]
fn starting_on_a_vertex_works() {
    let p = random_polygon(20, 2, 9).unwrap();
    for start in [p.vertex(0), p.vertex(p.n() - 1)] {
        let k = p.triangle_count().div_ceil(2);
        check(&p, &simulate_small_memory(&p, &SimConfig { agents: k, start, seed: 1 }).unwrap());
        check(&p, &simulate_warmup(&p, &SimConfig { agents: k, start, seed: 1 }).unwrap());
    }
}

#[test]
fn proximity_places_a_valid_guard_set() {
    for p in family() {
        let r = guardwalk::proximity::proximity_explore(&p).unwrap();
        assert_eq!(r.triangulation.len(), p.triangle_count());
        let out = verify_guards(&p, &r.guards.points(&p), 1500, 11).unwrap();
        assert!(out.passed(), "{out:?}");
        assert!(r.guards.len() <= p.guard_bound());
    }
}
