//! Leader-based protocol: one agent with linear memory maps the polygon,
//! computes the guards locally and leads the others to their posts.

use std::collections::{BTreeMap, VecDeque};

use super::engine::{Action, Agent, Look};
use super::trace::{token, untoken, Msg, Tag};
use crate::error::{Error, Result};
use crate::geometry::{signed_area2, Point, PolygonWithHoles};
use crate::guards::cooperative_guards;

/// Persistent words allowed to every agent except the leader.
pub const FOLLOWER_BUDGET: usize = 8;

/// Persistent words allowed to the leader on a polygon with `n` vertices.
pub fn leader_budget(n: usize) -> usize {
    16 * n + 64
}

#[derive(Debug, Clone)]
enum LeaderPhase {
    Explore,
    Tour { steps: Vec<(Point, i64)>, next: usize, followers_left: usize },
}

#[derive(Debug, Clone)]
struct Leader {
    /// Visited vertices with their `(prev, next)` sides.
    map: BTreeMap<Point, (Point, Point)>,
    stack: Vec<Point>,
    phase: LeaderPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Unknown,
    Waiting,
    Following,
}

#[derive(Debug, Clone)]
pub struct WarmupAgent {
    id: u64,
    k: usize,
    rank: usize,
    role: Role,
    leader: Option<Box<Leader>>,
    budget: usize,
}

impl WarmupAgent {
    pub fn new(id: u64, n: usize) -> Self {
        WarmupAgent { id, k: 0, rank: 0, role: Role::Unknown, leader: None, budget: leader_budget(n) }
    }

    /// Position in the drop order: the highest id is dropped first.
    fn drop_index(&self) -> i64 {
        (self.k - self.rank + 1) as i64
    }
}

/// Rebuilds the rings from the sides recorded at each vertex. Rings start at
/// their smallest vertex; holes are ordered by their smallest vertex.
fn rebuild(map: &BTreeMap<Point, (Point, Point)>) -> Result<PolygonWithHoles> {
    let mut seen = std::collections::BTreeSet::new();
    let mut rings = Vec::new();
    for &p in map.keys() {
        if seen.contains(&p) {
            continue;
        }
        let mut ring = vec![p];
        seen.insert(p);
        let mut q = map[&p].1;
        while q != p {
            if !seen.insert(q) {
                return Err(Error::Internal("side map is not a union of cycles".into()));
            }
            ring.push(q);
            q = map.get(&q).ok_or_else(|| Error::Internal(format!("vertex {q} never visited")))?.1;
        }
        rings.push(ring);
    }
    let outer = rings
        .iter()
        .position(|r| signed_area2(r) > 0)
        .ok_or_else(|| Error::Internal("no counter-clockwise ring".into()))?;
    let outer = rings.remove(outer);
    PolygonWithHoles::new(outer, rings)
}

/// Walk from `start` over a breadth-first tree of the guard visibility graph,
/// cut after the last first visit. Each step carries the drop index of the
/// follower to leave there, `0` for none, and `-1` for the leader's own post.
fn plan_tour(poly: &PolygonWithHoles, start: Point, guards: &[Point]) -> Vec<(Point, i64)> {
    let mut nodes = vec![start];
    nodes.extend(guards.iter().copied().filter(|&g| g != start));
    let m = nodes.len();
    let mut parent = vec![usize::MAX; m];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
    parent[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(a) = queue.pop_front() {
        for b in 1..m {
            if parent[b] == usize::MAX && poly.sees(nodes[a], nodes[b]) {
                parent[b] = a;
                children[a].push(b);
                queue.push_back(b);
            }
        }
    }
    let mut walk = vec![0];
    let mut stack = vec![(0usize, 0usize)];
    while let Some(&mut (v, ref mut k)) = stack.last_mut() {
        if *k < children[v].len() {
            let c = children[v][*k];
            *k += 1;
            walk.push(c);
            stack.push((c, 0));
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                walk.push(p);
            }
        }
    }
    let is_guard = |i: usize| guards.contains(&nodes[i]);
    let total = guards.len();
    let mut steps = Vec::new();
    let mut first = vec![true; m];
    let mut dropped = 0usize;
    for &i in &walk {
        let mut tag = 0;
        if first[i] && is_guard(i) {
            dropped += 1;
            tag = if dropped == total { -1 } else { dropped as i64 };
        }
        first[i] = false;
        steps.push((nodes[i], tag));
        if tag == -1 {
            break;
        }
    }
    steps
}

impl Agent for WarmupAgent {
    fn id(&self) -> u64 {
        self.id
    }

    fn budget(&self) -> usize {
        if self.leader.is_some() {
            self.budget
        } else {
            FOLLOWER_BUDGET
        }
    }

    fn memory_words(&self) -> usize {
        let base = 4;
        match &self.leader {
            None => base + usize::from(self.role != Role::Unknown),
            Some(l) => {
                let tour = match &l.phase {
                    LeaderPhase::Explore => 0,
                    LeaderPhase::Tour { steps, .. } => 3 * steps.len() + 2,
                };
                base + 6 * l.map.len() + 2 * l.stack.len() + tour
            }
        }
    }

    fn step(&mut self, look: &Look<'_>) -> Result<Action> {
        if look.round == 0 {
            return Ok(Action::say(Msg::new(Tag::Id, &[self.id as i64])));
        }
        if self.k == 0 {
            self.k = look.inbox.iter().filter(|(_, m)| m.tag == Tag::Id).count() + 1;
            self.rank = 1 + look
                .inbox
                .iter()
                .filter(|(_, m)| m.tag == Tag::Id && (m.word(0) as u64) < self.id)
                .count();
            if self.rank == 1 {
                self.leader = Some(Box::new(Leader {
                    map: BTreeMap::new(),
                    stack: vec![look.view.position()],
                    phase: LeaderPhase::Explore,
                }));
            } else {
                self.role = Role::Waiting;
            }
        }
        if self.leader.is_some() {
            return self.lead(look);
        }
        let me = self.drop_index();
        for (_, m) in look.inbox {
            match (self.role, m.tag) {
                (Role::Waiting, Tag::Recruit) => {
                    if me > m.word(0) {
                        return Ok(Action::idle().stop(false));
                    }
                    self.role = Role::Following;
                }
                (Role::Following, Tag::Move) => {
                    let a = Action::idle().with_move(untoken(m.word(0)));
                    return Ok(if m.word(1) == me { a.stop(true) } else { a });
                }
                _ => {}
            }
        }
        Ok(Action::idle())
    }
}

impl WarmupAgent {
    fn lead(&mut self, look: &Look<'_>) -> Result<Action> {
        let k = self.k;
        let l = self.leader.as_mut().unwrap();
        let here = look.view.position();
        match &mut l.phase {
            LeaderPhase::Explore => {
                if let Some(sides) = look.view.incident_sides() {
                    l.map.entry(here).or_insert(sides);
                }
                let visible = look.view.visible_vertices();
                if let Some(&v) = visible.iter().find(|v| !l.map.contains_key(v)) {
                    l.stack.push(v);
                    return Ok(Action::idle().with_move(v));
                }
                l.stack.pop();
                if let Some(&back) = l.stack.last() {
                    return Ok(Action::idle().with_move(back));
                }
                let local = rebuild(&l.map)?;
                let guards = cooperative_guards(&local)?.points(&local);
                if guards.len() > k {
                    return Err(Error::InsufficientAgents { required: guards.len(), available: k });
                }
                let steps = plan_tour(&local, here, &guards);
                let followers = guards.len() - 1;
                l.phase = LeaderPhase::Tour { steps, next: 1, followers_left: followers };
                if let LeaderPhase::Tour { steps, next, .. } = &mut l.phase {
                    // a guard at the start itself is taken on the spot
                    if steps[0].1 != 0 {
                        *next = 0;
                    }
                }
                Ok(Action::say(Msg::new(Tag::Recruit, &[followers as i64])))
            }
            LeaderPhase::Tour { steps, next, followers_left } => {
                let Some(&(p, tag)) = steps.get(*next) else {
                    return Err(Error::Internal("tour ended before the leader's post".into()));
                };
                *next += 1;
                let mut a = Action::idle().with_move(p);
                if tag == -1 {
                    return Ok(a.stop(true));
                }
                if *followers_left > 0 {
                    a = a.with_broadcast(Msg::new(Tag::Move, &[token(p), tag]));
                    if tag > 0 {
                        *followers_left -= 1;
                    }
                }
                Ok(a)
            }
        }
    }
}
