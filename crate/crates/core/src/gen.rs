//! Polygon families used by the CLI and the test suites.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, PolygonWithHoles};

/// Step length of the comb staircase.
pub const COMB_STEP: i64 = 10;
/// Corridor width of the comb staircase.
pub const COMB_WIDTH: i64 = 3;

/// A staircase corridor with `k + 1` straight legs and `2k + 4` vertices.
///
/// Consecutive legs turn by a right angle and the corridor is narrow, so a
/// point sees into a bounded number of neighbouring legs. Any connected
/// guard set therefore needs a relay chain whose length grows with `k`.
pub fn comb(k: usize) -> Result<PolygonWithHoles> {
    if k < 2 {
        return Err(Error::invalid(format!("comb needs at least 2 teeth, got {k}")));
    }
    let (l, d) = (COMB_STEP, COMB_WIDTH);
    let legs = k + 1;
    let mut s = vec![Point::new(0, 0)];
    for i in 0..legs {
        let last = *s.last().unwrap();
        s.push(if i % 2 == 0 { Point::new(last.x + l, last.y) } else { Point::new(last.x, last.y + l) });
    }
    let shift = Point::new(d, 0);
    let mut outer: Vec<Point> = s.iter().map(|p| p.add(shift)).collect();
    outer.extend(s.iter().rev().map(|p| Point::new(p.x - d, p.y + d).add(shift)));
    PolygonWithHoles::new(outer, vec![])
}

/// A square room with `h` square pillars arranged on a circle.
pub fn ring_of_holes(h: usize) -> Result<PolygonWithHoles> {
    let a = 2i64;
    let radius = (4 * h as i64).max(10);
    let c = radius + 12;
    let size = 2 * c;
    let outer = vec![Point::new(0, 0), Point::new(size, 0), Point::new(size, size), Point::new(0, size)];
    let holes = (0..h)
        .map(|i| {
            let th = TAU * i as f64 / h as f64;
            let cx = c + (radius as f64 * th.cos()).round() as i64;
            let cy = c + (radius as f64 * th.sin()).round() as i64;
            vec![
                Point::new(cx - a, cy - a),
                Point::new(cx + a, cy - a),
                Point::new(cx + a, cy + a),
                Point::new(cx - a, cy + a),
            ]
        })
        .collect();
    PolygonWithHoles::new(outer, holes)
}

/// A random star-shaped outer ring with `n - 3h` vertices and `h`
/// triangular holes near its centre, so `n` counts all vertices.
pub fn random_polygon(n: usize, holes: usize, seed: u64) -> Result<PolygonWithHoles> {
    let outer_n = n
        .checked_sub(3 * holes)
        .filter(|&m| m >= 3)
        .ok_or_else(|| Error::invalid(format!("n = {n} is too small for {holes} holes")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = 400.0 + 20.0 * n as f64;
    let c = radius + 10.0;
    let at = |r: f64, th: f64| Point::new((c + r * th.cos()).round() as i64, (c + r * th.sin()).round() as i64);

    for _ in 0..1000 {
        let outer: Vec<Point> = (0..outer_n)
            .map(|i| {
                let th = (i as f64 + rng.random_range(0.3..0.7)) * TAU / outer_n as f64;
                at(rng.random_range(0.55 * radius..radius), th)
            })
            .collect();
        let Ok(base) = PolygonWithHoles::new(outer.clone(), vec![]) else {
            continue;
        };
        let mut placed: Vec<Vec<Point>> = Vec::new();
        let rho = 0.06 * radius;
        for _ in 0..holes {
            for _ in 0..200 {
                let hr = rng.random_range(0.0..0.35 * radius);
                let hth = rng.random_range(0.0..TAU);
                let (hx, hy) = (hr * hth.cos(), hr * hth.sin());
                let phi = rng.random_range(0.0..TAU);
                let tri: Vec<Point> = (0..3)
                    .map(|k| {
                        let a = phi + TAU * k as f64 / 3.0 + rng.random_range(-0.3..0.3);
                        let p = at(rho, a);
                        Point::new(p.x + hx.round() as i64, p.y + hy.round() as i64)
                    })
                    .collect();
                let mut trial = placed.clone();
                trial.push(tri);
                if PolygonWithHoles::new(outer.clone(), trial.clone()).is_ok() {
                    placed = trial;
                    break;
                }
            }
        }
        if placed.len() == holes {
            return if holes == 0 { Ok(base) } else { PolygonWithHoles::new(outer, placed) };
        }
    }
    Err(Error::Internal(format!("no random polygon found for n = {n}, h = {holes}")))
}

/// A fixed instance with 14 vertices and 2 holes.
pub fn two_hole_example() -> PolygonWithHoles {
    let r = |v: &[(i64, i64)]| v.iter().map(|&p| Point::from(p)).collect::<Vec<_>>();
    PolygonWithHoles::new(
        r(&[(0, 0), (20, 0), (30, 8), (30, 20), (20, 28), (8, 28), (0, 20), (4, 12)]),
        vec![r(&[(8, 8), (14, 8), (10, 14)]), r(&[(18, 14), (24, 16), (20, 21)])],
    )
    .expect("fixed example is valid")
}

/// The 10 by 10 square.
pub fn square() -> PolygonWithHoles {
    let r = [(0, 0), (10, 0), (10, 10), (0, 10)].map(Point::from).to_vec();
    PolygonWithHoles::new(r, vec![]).expect("square is valid")
}

/// The 10 by 10 square with a 2 by 2 hole in the middle.
pub fn square_with_hole() -> PolygonWithHoles {
    let outer = [(0, 0), (10, 0), (10, 10), (0, 10)].map(Point::from).to_vec();
    let hole = [(4, 4), (6, 4), (6, 6), (4, 6)].map(Point::from).to_vec();
    PolygonWithHoles::new(outer, vec![hole]).expect("square with hole is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_sizes() {
        for k in [2, 3, 8, 64] {
            let p = comb(k).unwrap();
            assert_eq!((p.n(), p.h()), (2 * k + 4, 0));
        }
        assert!(comb(1).is_err());
    }

    #[test]
    fn ring_of_holes_sizes() {
        for h in [0, 1, 2, 6, 12] {
            let p = ring_of_holes(h).unwrap();
            assert_eq!((p.n(), p.h()), (4 + 4 * h, h));
        }
    }

    #[test]
    fn random_polygons_are_valid_and_seeded() {
        for (n, h) in [(3, 0), (10, 0), (40, 2), (200, 6), (64, 1)] {
            let p = random_polygon(n, h, 7).unwrap();
            assert_eq!((p.n(), p.h()), (n, h));
        }
        assert_eq!(random_polygon(40, 1, 7).unwrap(), random_polygon(40, 1, 7).unwrap());
        assert_ne!(random_polygon(40, 1, 7).unwrap(), random_polygon(40, 1, 8).unwrap());
        assert!(random_polygon(8, 2, 0).is_err());
    }

    #[test]
    fn two_hole_example_counts() {
        let p = two_hole_example();
        assert_eq!((p.n(), p.h(), p.guard_bound()), (14, 2, 8));
    }
}
