//! Replays a trace against the model rules.

use std::collections::{HashMap, HashSet};

use super::trace::{Event, SimTrace};
use crate::error::{Error, Result};
use crate::geometry::{Point, PolygonWithHoles};

fn violation(round: usize, rule: impl Into<String>) -> Error {
    Error::ModelViolation { round, rule: rule.into() }
}

fn phase(e: &Event) -> u8 {
    match e {
        Event::Look { .. } => 0,
        Event::Bcast { .. } => 1,
        Event::Move { .. } => 2,
    }
}

/// Checks lockstep ordering, straight moves inside sight, exact broadcast
/// delivery to the agents in sight, and memory budgets. Returns the first
/// violation found.
pub fn model_check(trace: &SimTrace, poly: &PolygonWithHoles) -> Result<()> {
    let mut pos: HashMap<u64, Point> = HashMap::new();
    let mut active_prev: HashSet<u64> = HashSet::new();
    let mut active: HashSet<u64> = HashSet::new();
    let mut cur_round = 0usize;
    let mut cur_phase = 0u8;
    let mut bcasts = 0usize;
    let mut last_look_round = None;

    for e in &trace.events {
        let r = e.round();
        if r < cur_round || (r == cur_round && phase(e) < cur_phase) {
            return Err(violation(r, "events out of Look-Compute-Move order"));
        }
        if r > cur_round {
            if r != cur_round + 1 && !active.is_empty() {
                return Err(violation(r, "skipped round while agents were active"));
            }
            active_prev = std::mem::take(&mut active);
            cur_round = r;
        }
        cur_phase = phase(e);
        match e {
            Event::Look { id, at, .. } => {
                if r > 0 && !active_prev.contains(id) {
                    return Err(violation(r, format!("agent {id} looks after terminating")));
                }
                if let Some(p) = pos.get(id) {
                    if p != at {
                        return Err(violation(r, format!("agent {id} looks from {at} but stands at {p}")));
                    }
                }
                if !poly.contains(*at) {
                    return Err(violation(r, format!("agent {id} stands outside the polygon")));
                }
                pos.insert(*id, *at);
                active.insert(*id);
                last_look_round = Some(r);
            }
            Event::Bcast { sender, receivers, .. } => {
                bcasts += 1;
                if r == 0 || !active_prev.contains(sender) {
                    return Err(violation(r, format!("delivery from {sender}, which did not compute last round")));
                }
                let from = *pos.get(sender).ok_or_else(|| violation(r, "unknown sender"))?;
                let mut expected: Vec<u64> = active
                    .iter()
                    .copied()
                    .filter(|a| a != sender && poly.sees(from, pos[a]))
                    .collect();
                expected.sort_unstable();
                let mut got = receivers.clone();
                got.sort_unstable();
                if got != expected {
                    return Err(violation(
                        r,
                        format!("broadcast from {sender} delivered to {got:?}, agents in sight are {expected:?}"),
                    ));
                }
            }
            Event::Move { id, from, to, .. } => {
                if !active.contains(id) {
                    return Err(violation(r, format!("agent {id} moves without looking")));
                }
                if pos.get(id) != Some(from) {
                    return Err(violation(r, format!("agent {id} moves from {from}, not its position")));
                }
                if !poly.sees(*from, *to) {
                    return Err(violation(r, format!("agent {id} moves from {from} to {to} out of sight")));
                }
                pos.insert(*id, *to);
            }
        }
    }
    if bcasts != trace.total_broadcasts {
        return Err(violation(cur_round, "broadcast total does not match the events"));
    }
    if last_look_round.map_or(0, |r| r + 1) != trace.total_rounds {
        return Err(violation(cur_round, "round total does not match the events"));
    }
    for m in &trace.memory {
        if m.peak > m.budget {
            return Err(violation(cur_round, format!("agent {} peaked at {} words over {}", m.id, m.peak, m.budget)));
        }
    }
    Ok(())
}
