//! Independent checks of guard sets: sampled coverage, connectivity of the
//! guard visibility graph, and the triangle certificate.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, PolygonWithHoles};
use crate::guards::GuardedTriplet;
use crate::triangulation::{DualGraph, Triangulation};

/// Sample points live on a grid refined by this factor.
pub const SAMPLE_SCALE: i64 = 8;

/// A point on the refined sampling grid, printed in polygon units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SamplePoint(pub Point);

impl fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = SAMPLE_SCALE as f64;
        write!(f, "({}, {})", self.0.x as f64 / s, self.0.y as f64 / s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: usize,
    pub total: usize,
    /// Uncovered samples, at most [`MAX_WITNESSES`].
    pub witnesses: Vec<SamplePoint>,
}

pub const MAX_WITNESSES: usize = 16;

impl CoverageReport {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.covered as f64 / self.total as f64
        }
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.total
    }
}

fn check_guards(poly: &PolygonWithHoles, guards: &[Point]) -> Result<()> {
    match guards.iter().find(|g| !poly.contains(**g)) {
        Some(g) => Err(Error::invalid(format!("guard {g} lies outside the polygon"))),
        None => Ok(()),
    }
}

/// Seeded rejection samples inside `poly`, on the refined grid.
pub fn sample_points(poly: &PolygonWithHoles, count: usize, seed: u64) -> Vec<SamplePoint> {
    let fine = poly.scaled(SAMPLE_SCALE);
    let (lo, hi) = fine.bbox();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < count.saturating_mul(1000).max(1000) {
        attempts += 1;
        let q = Point::new(rng.random_range(lo.x..=hi.x), rng.random_range(lo.y..=hi.y));
        if fine.contains(q) {
            out.push(SamplePoint(q));
        }
    }
    out
}

/// Fraction of seeded samples seen by at least one guard.
pub fn verify_point_coverage(
    poly: &PolygonWithHoles,
    guards: &[Point],
    sample_count: usize,
    seed: u64,
) -> Result<CoverageReport> {
    check_guards(poly, guards)?;
    let fine = poly.scaled(SAMPLE_SCALE);
    let fg: Vec<Point> = guards.iter().map(|g| g.scale(SAMPLE_SCALE)).collect();
    let samples = sample_points(poly, sample_count, seed);
    let mut covered = 0;
    let mut witnesses = Vec::new();
    for s in &samples {
        if fg.iter().any(|&g| fine.sees(g, s.0)) {
            covered += 1;
        } else if witnesses.len() < MAX_WITNESSES {
            witnesses.push(*s);
        }
    }
    Ok(CoverageReport { covered, total: samples.len(), witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub connected: bool,
    /// Components of the guard visibility graph as indices into the guard list.
    pub components: Vec<Vec<usize>>,
}

pub fn visibility_components(poly: &PolygonWithHoles, guards: &[Point]) -> Vec<Vec<usize>> {
    let g = guards.len();
    let mut comp = vec![usize::MAX; g];
    let mut out = Vec::new();
    for s in 0..g {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for b in 0..g {
                if comp[b] == usize::MAX && poly.sees(guards[a], guards[b]) {
                    comp[b] = id;
                    members.push(b);
                    queue.push_back(b);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn verify_connectivity(poly: &PolygonWithHoles, guards: &[Point]) -> Result<ConnectivityReport> {
    check_guards(poly, guards)?;
    let components = visibility_components(poly, guards);
    Ok(ConnectivityReport { connected: components.len() <= 1, components })
}

/// Nodes lie on a dual path with at most two edges.
pub fn on_short_path(dual: &DualGraph, nodes: &[usize]) -> bool {
    match nodes {
        [_] => true,
        [a, b] => dual.are_adjacent(*a, *b),
        [a, b, c] => [(*a, *b, *c), (*b, *a, *c), (*c, *a, *b)]
            .iter()
            .any(|&(m, x, y)| dual.are_adjacent(m, x) && dual.are_adjacent(m, y)),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Every dual node is in some triplet, each guard is a vertex of all its
/// triplet's triangles, and each triplet lies on a short dual path.
pub fn verify_cover_certificate(
    t: &Triangulation,
    dual: &DualGraph,
    assignments: &[GuardedTriplet],
) -> CertificateReport {
    let mut failures = Vec::new();
    let mut covered = vec![false; t.triangles.len()];
    for a in assignments {
        let nodes = &a.triplet.nodes;
        if nodes.iter().any(|&k| k >= covered.len()) {
            failures.push(format!("triplet {} names a missing triangle", a.triplet));
            continue;
        }
        for &k in nodes {
            covered[k] = true;
        }
        if let Some(&k) = nodes.iter().find(|&&k| !t.triangles[k].contains_vertex(a.guard_vertex)) {
            failures.push(format!(
                "guard vertex {} is not a corner of triangle {k} in triplet {}",
                a.guard_vertex, a.triplet
            ));
        }
        if !on_short_path(dual, nodes) {
            failures.push(format!("triplet {} is not on a dual path of length 2", a.triplet));
        }
    }
    for (k, c) in covered.iter().enumerate() {
        if !c {
            failures.push(format!("triangle {k} belongs to no triplet"));
        }
    }
    CertificateReport { ok: failures.is_empty(), failures }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub coverage: CoverageReport,
    pub connectivity: ConnectivityReport,
    pub bound: usize,
    pub bound_ok: bool,
    pub certificate: Option<CertificateReport>,
}

impl VerificationReport {
    pub fn coverage_fraction(&self) -> f64 {
        self.coverage.fraction()
    }

    pub fn connected(&self) -> bool {
        self.connectivity.connected
    }

    pub fn certificate_ok(&self) -> bool {
        self.certificate.as_ref().is_none_or(|c| c.ok)
    }

    pub fn passed(&self) -> bool {
        self.coverage.is_complete() && self.connected() && self.bound_ok && self.certificate_ok()
    }
}

/// Coverage, connectivity and the size bound for an arbitrary guard list.
pub fn verify_guards(
    poly: &PolygonWithHoles,
    guards: &[Point],
    sample_count: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let coverage = verify_point_coverage(poly, guards, sample_count, seed)?;
    let connectivity = verify_connectivity(poly, guards)?;
    let bound = poly.guard_bound();
    Ok(VerificationReport {
        coverage,
        connectivity,
        bound,
        bound_ok: guards.len() <= bound,
        certificate: None,
    })
}
