//! Lockstep Look-Compute-Move rounds with broadcast delivery and memory
//! accounting.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::trace::{Event, MemoryRecord, Msg, SimTrace};
use crate::error::{Error, Result};
use crate::geometry::{angle_dist_cmp, Point, PolygonWithHoles};

/// Words per broadcast payload.
pub const PAYLOAD_WORDS: usize = 4;

/// Hard stop for runaway protocols.
pub const MAX_ROUNDS: usize = 1_000_000;

/// What an agent perceives during Look: its visibility polygon, from which
/// it reads vertex coordinates, the sides through its own position and
/// whether given points and segments are in sight.
pub struct View<'a> {
    poly: &'a PolygonWithHoles,
    at: Point,
    cache: &'a RefCell<HashMap<Point, Rc<Vec<Point>>>>,
}

impl<'a> View<'a> {
    pub fn position(&self) -> Point {
        self.at
    }

    /// Visible polygon vertices, ordered by angle from +x and then distance.
    pub fn visible_vertices(&self) -> Rc<Vec<Point>> {
        if let Some(v) = self.cache.borrow().get(&self.at) {
            return v.clone();
        }
        let mut v: Vec<Point> = self
            .poly
            .visible_vertices(self.at)
            .into_iter()
            .map(|i| self.poly.vertex(i))
            .filter(|&p| p != self.at)
            .collect();
        v.sort_by(|a, b| angle_dist_cmp(a.sub(self.at), b.sub(self.at)));
        let v = Rc::new(v);
        self.cache.borrow_mut().insert(self.at, v.clone());
        v
    }

    /// The sides through the observer's position when it stands on a vertex:
    /// `(prev, next)` with the interior to the left of `prev -> at -> next`.
    pub fn incident_sides(&self) -> Option<(Point, Point)> {
        let i = self.poly.vertex_index(self.at)?;
        Some((self.poly.vertex(self.poly.prev(i)), self.poly.vertex(self.poly.next(i))))
    }

    pub fn sees(&self, q: Point) -> bool {
        self.poly.sees(self.at, q)
    }

    /// Whether `a b` is a polygon side; both ends must be in sight.
    pub fn is_side(&self, a: Point, b: Point) -> bool {
        debug_assert!(self.sees(a) && self.sees(b));
        match (self.poly.vertex_index(a), self.poly.vertex_index(b)) {
            (Some(i), Some(j)) => self.poly.is_side(i, j),
            _ => false,
        }
    }

    /// Whether the triangle `at, b, c` lies in the polygon and has no polygon
    /// vertex on it apart from its corners. Such a triangle is entirely in
    /// sight of its apex, so the test only uses the observer's view.
    pub fn empty_triangle(&self, b: Point, c: Point) -> bool {
        let a = self.at;
        let area = crate::geometry::cross(a, b, c);
        if area == 0 || !self.sees(b) || !self.sees(c) || !self.poly.sees(b, c) {
            return false;
        }
        let s = area.signum();
        !self.poly.vertices().iter().any(|&w| {
            w != a
                && w != b
                && w != c
                && crate::geometry::cross(a, b, w) * s >= 0
                && crate::geometry::cross(b, c, w) * s >= 0
                && crate::geometry::cross(c, a, w) * s >= 0
        })
    }
}

pub struct Look<'a> {
    pub round: usize,
    pub view: View<'a>,
    /// Broadcasts delivered this round, in sender order.
    pub inbox: &'a [(u64, Msg)],
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Action {
    pub broadcast: Option<Msg>,
    pub move_to: Option<Point>,
    /// Stop after this round's move.
    pub terminate: bool,
    /// When terminating, stay as a guard at the final position.
    pub guard: bool,
}

impl Action {
    pub fn idle() -> Self {
        Action::default()
    }

    pub fn say(msg: Msg) -> Self {
        Action { broadcast: Some(msg), ..Action::default() }
    }

    pub fn with_move(mut self, to: Point) -> Self {
        self.move_to = Some(to);
        self
    }

    pub fn with_broadcast(mut self, msg: Msg) -> Self {
        self.broadcast = Some(msg);
        self
    }

    pub fn stop(mut self, guard: bool) -> Self {
        self.terminate = true;
        self.guard = guard;
        self
    }
}

pub trait Agent {
    fn id(&self) -> u64;
    fn step(&mut self, look: &Look<'_>) -> Result<Action>;
    /// Words of persistent state currently held.
    fn memory_words(&self) -> usize;
    fn budget(&self) -> usize;
}

struct Slot<A> {
    agent: A,
    pos: Point,
    active: bool,
    guard: bool,
    peak: usize,
}

/// Runs agents deployed at `start` until every one has terminated.
pub fn run<A: Agent>(
    poly: &PolygonWithHoles,
    agents: Vec<A>,
    start: Point,
    mode: &str,
    seed: u64,
    leader: Option<u64>,
) -> Result<SimTrace> {
    let cache = RefCell::new(HashMap::new());
    let ids: Vec<u64> = agents.iter().map(|a| a.id()).collect();
    let mut slots: Vec<Slot<A>> = agents
        .into_iter()
        .map(|agent| Slot { peak: agent.memory_words(), agent, pos: start, active: true, guard: false })
        .collect();
    let mut events = Vec::new();
    let mut pending: Vec<(usize, Msg)> = Vec::new();
    let mut broadcasts = 0usize;
    let mut round = 0usize;

    while slots.iter().any(|s| s.active) {
        if round >= MAX_ROUNDS {
            return Err(Error::Internal(format!("simulation exceeded {MAX_ROUNDS} rounds")));
        }
        for s in slots.iter().filter(|s| s.active) {
            events.push(Event::Look { round, id: s.agent.id(), at: s.pos });
        }
        let mut inbox: Vec<Vec<(u64, Msg)>> = vec![Vec::new(); slots.len()];
        for (sender, msg) in pending.drain(..) {
            let from = slots[sender].pos;
            let mut receivers = Vec::new();
            for (k, s) in slots.iter().enumerate() {
                if k != sender && s.active && poly.sees(from, s.pos) {
                    receivers.push(s.agent.id());
                    inbox[k].push((slots[sender].agent.id(), msg.clone()));
                }
            }
            events.push(Event::Bcast { round, sender: slots[sender].agent.id(), msg, receivers });
        }

        let mut actions = Vec::with_capacity(slots.len());
        for (k, s) in slots.iter_mut().enumerate() {
            if !s.active {
                actions.push(None);
                continue;
            }
            let look = Look { round, view: View { poly, at: s.pos, cache: &cache }, inbox: &inbox[k] };
            let action = s.agent.step(&look)?;
            let words = s.agent.memory_words();
            s.peak = s.peak.max(words);
            if words > s.agent.budget() {
                return Err(Error::MemoryBudgetExceeded {
                    agent: s.agent.id(),
                    words,
                    budget: s.agent.budget(),
                });
            }
            if let Some(m) = &action.broadcast {
                if m.words.len() > PAYLOAD_WORDS {
                    return Err(Error::ModelViolation {
                        round,
                        rule: format!("agent {} broadcast {} words", s.agent.id(), m.words.len()),
                    });
                }
            }
            actions.push(Some(action));
        }

        for (k, action) in actions.into_iter().enumerate() {
            let Some(action) = action else { continue };
            let s = &mut slots[k];
            if let Some(m) = action.broadcast {
                pending.push((k, m));
                broadcasts += 1;
            }
            if let Some(to) = action.move_to {
                if to != s.pos {
                    if !poly.sees(s.pos, to) {
                        return Err(Error::ModelViolation {
                            round,
                            rule: format!("agent {} moves from {} to {} out of sight", s.agent.id(), s.pos, to),
                        });
                    }
                    events.push(Event::Move { round, id: s.agent.id(), from: s.pos, to });
                    s.pos = to;
                }
            }
            if action.terminate {
                s.active = false;
                s.guard = action.guard;
            }
        }
        round += 1;
    }
    for (sender, msg) in pending.drain(..) {
        events.push(Event::Bcast { round, sender: slots[sender].agent.id(), msg, receivers: Vec::new() });
    }

    let mut guards: Vec<Point> = slots.iter().filter(|s| s.guard).map(|s| s.pos).collect();
    guards.sort_unstable();
    guards.dedup();
    Ok(SimTrace {
        polygon_hash: crate::io::polygon_hash(poly),
        mode: mode.to_string(),
        seed,
        agents: ids,
        leader,
        events,
        total_rounds: round,
        total_broadcasts: broadcasts,
        memory: slots
            .iter()
            .map(|s| MemoryRecord { id: s.agent.id(), peak: s.peak, budget: s.agent.budget() })
            .collect(),
        guards,
    })
}
