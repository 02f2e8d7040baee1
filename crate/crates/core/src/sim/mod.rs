//! Mobile-agent simulation: agents deployed at one start point compute and
//! occupy a cooperative guard set.

pub mod check;
pub mod engine;
pub mod small_memory;
pub mod trace;
pub mod warmup;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use check::model_check;
pub use trace::{Event, MemoryRecord, Msg, SimTrace, Tag};

use crate::error::{Error, Result};
use crate::geometry::{Point, PolygonWithHoles};
use crate::guards::GuardSet;

/// Deployment parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub agents: usize,
    pub start: Point,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SimOutcome {
    /// Final guard positions as vertex indices of the input polygon.
    pub guards: GuardSet,
    pub trace: SimTrace,
}

/// The comb family, whose connected guard sets are far apart.
pub fn gen_comb_polygon(k: usize) -> Result<PolygonWithHoles> {
    crate::gen::comb(k)
}

/// Distinct agent ids drawn from the seed.
pub fn agent_ids(k: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut ids = Vec::with_capacity(k);
    while ids.len() < k {
        let id = rng.random_range(1..=1_000_000_000u64);
        if seen.insert(id) {
            ids.push(id);
        }
    }
    ids
}

fn prepare(poly: &PolygonWithHoles, cfg: &SimConfig) -> Result<Vec<u64>> {
    if cfg.agents == 0 {
        return Err(Error::invalid("at least one agent is required"));
    }
    if !poly.contains(cfg.start) {
        return Err(Error::UnreachableStart);
    }
    Ok(agent_ids(cfg.agents, cfg.seed))
}

fn outcome(poly: &PolygonWithHoles, trace: SimTrace) -> Result<SimOutcome> {
    let idx = trace
        .guards
        .iter()
        .map(|&g| poly.vertex_index(g).ok_or_else(|| Error::Internal(format!("guard {g} is not a vertex"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimOutcome { guards: GuardSet::from_vertices(idx), trace })
}

/// Runs the leader-based protocol.
pub fn simulate_warmup(poly: &PolygonWithHoles, cfg: &SimConfig) -> Result<SimOutcome> {
    let ids = prepare(poly, cfg)?;
    let leader = ids.iter().copied().min();
    let agents = ids.iter().map(|&id| warmup::WarmupAgent::new(id, poly.n())).collect();
    let trace = engine::run(poly, agents, cfg.start, "warmup", cfg.seed, leader)?;
    outcome(poly, trace)
}

/// Runs the constant-memory protocol. Needs at least `ceil(N / 2)` agents
/// for a polygon whose triangulations have `N` triangles.
pub fn simulate_small_memory(poly: &PolygonWithHoles, cfg: &SimConfig) -> Result<SimOutcome> {
    let ids = prepare(poly, cfg)?;
    let leader = ids.iter().copied().min();
    let agents = ids.iter().map(|&id| small_memory::SmallMemoryAgent::new(id)).collect();
    let trace = engine::run(poly, agents, cfg.start, "small-memory", cfg.seed, leader).map_err(|e| match e {
        Error::InsufficientAgents { available, .. } => {
            Error::InsufficientAgents { required: poly.triangle_count().div_ceil(2), available }
        }
        e => e,
    })?;
    outcome(poly, trace)
}
