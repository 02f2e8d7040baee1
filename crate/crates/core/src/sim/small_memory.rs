//! Protocol in which every agent keeps a constant number of words.
//!
//! The agents travel as one group. The triangulation is built by a
//! depth-first search over triangles, triangle `i` being stored by the agent
//! of rank `ceil(i / 5)`. A new triangle across an edge `uv` is chosen among
//! the vertices seen from `u`, ranked in look order: the leader proposes the
//! first rank it accepts and every other owner answers with the first rank at
//! or after it that none of its triangles rules out, until the proposal is
//! stable. Triplets are then formed by a stationary post-order pass, after
//! which the group walks the tree and drops guards.
//!
//! For the walk, the record of the node finishing `i`-th is handed to the
//! agent with drop index `ceil(i / 2)`. Within any post-order prefix of
//! length `f` at most `floor(f / 2)` triplets are formed, so the agent with
//! drop index `d` is dropped only after the nodes it holds have finished.

use super::engine::{Action, Agent, Look, View};
use super::trace::{token, untoken, Msg, Tag, NONE};
use crate::error::{Error, Result};
use crate::geometry::{cross, orientation, Orientation, Point};

/// Persistent words allowed to every agent.
pub const MEMORY_BUDGET: usize = 128;

/// Triangles stored per agent.
pub const TRIANGLES_PER_AGENT: usize = 5;

const RECORD_WORDS: usize = 12;
const TOUR_WORDS: usize = 14;

#[derive(Debug, Clone)]
struct TriRecord {
    idx: usize,
    /// Slot `s` is the edge `v[s] -> v[(s + 1) % 3]`; slot 0 faces the parent.
    v: [Point; 3],
    parent: usize,
    side: [bool; 3],
    child: [Option<usize>; 3],
    /// Whether the child's triplet contains this node.
    has_me: [bool; 3],
    cursor: usize,
    cursor3: usize,
    finish_step: u8,
}

impl TriRecord {
    fn edge(&self, s: usize) -> (Point, Point) {
        (self.v[s], self.v[(s + 1) % 3])
    }

    fn opposite(&self, s: usize) -> Point {
        self.v[(s + 2) % 3]
    }

    fn is_root(&self) -> bool {
        self.parent == self.idx
    }

    /// The triplet formed here, as `(guard, parent is a member)`.
    fn triplet(&self) -> Option<(Point, bool)> {
        let c: Vec<usize> = (0..3).filter(|&s| self.child[s].is_some() && !self.has_me[s]).collect();
        let common = |a: usize, b: usize| -> Point {
            // edges a and b of a triangle share exactly one endpoint
            let (p, q) = self.edge(a);
            let (r, t) = self.edge(b);
            if p == r || p == t {
                p
            } else {
                debug_assert!(q == r || q == t);
                q
            }
        };
        match c.len() {
            1 if self.is_root() => {
                let (p, q) = self.edge(c[0]);
                Some((p.min(q), false))
            }
            1 => Some((common(c[0], 0), true)),
            2 => Some((common(c[0], c[1]), false)),
            0 if self.is_root() && self.child.iter().all(|c| c.is_none()) => {
                Some((*self.v.iter().min().unwrap(), false))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct TourRecord {
    v: usize,
    parent: usize,
    children: [Option<(usize, Point)>; 2],
    up: Option<Point>,
    guard: Option<Point>,
    j: usize,
    cursor: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Setup,
    Root,
    Explore,
    PostOrder,
    Tour,
}

#[derive(Debug, Clone)]
pub struct SmallMemoryAgent {
    id: u64,
    k: usize,
    rank: usize,
    pred: u64,
    succ: u64,
    phase: Phase,
    m: usize,
    cur: usize,
    explore: Option<(Point, Point, Point)>,
    finishes: usize,
    triplets: usize,
    // leader only
    root_at: Option<Point>,
    choosing: bool,
    query: Option<usize>,
    // owners
    respond_to: Option<usize>,
    records: Vec<TriRecord>,
    tours: Vec<TourRecord>,
    partial: Option<TourRecord>,
    echo: Option<Msg>,
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn opt_token(p: Option<Point>) -> i64 {
    p.map_or(NONE, token)
}

fn opt_point(t: i64) -> Option<Point> {
    (t != NONE).then(|| untoken(t))
}

fn opt_index(x: i64) -> Option<usize> {
    (x != NONE).then_some(x as usize)
}

/// Interiors of two non-degenerate triangles intersect.
pub fn triangles_overlap(a: [Point; 3], b: [Point; 3]) -> bool {
    let separated = |t: [Point; 3], o: [Point; 3]| {
        (0..3).any(|i| {
            let (p, q, r) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
            let s = cross(p, q, r).signum();
            o.iter().all(|&x| cross(p, q, x).signum() * s <= 0)
        })
    };
    !separated(a, b) && !separated(b, a)
}

/// Vertices seen from the observer strictly across the line `u v` from
/// `opp`, in look order.
fn candidates(view: &View<'_>, u: Point, v: Point, opp: Point) -> Vec<Point> {
    let far = match orientation(u, v, opp) {
        Orientation::Left => Orientation::Right,
        Orientation::Right => Orientation::Left,
        Orientation::Collinear => return Vec::new(),
    };
    view.visible_vertices()
        .iter()
        .copied()
        .filter(|&q| orientation(u, v, q) == far)
        .collect()
}

impl SmallMemoryAgent {
    pub fn new(id: u64) -> Self {
        SmallMemoryAgent {
            id,
            k: 0,
            rank: 0,
            pred: 0,
            succ: 0,
            phase: Phase::Setup,
            m: 0,
            cur: 0,
            explore: None,
            finishes: 0,
            triplets: 0,
            root_at: None,
            choosing: false,
            query: None,
            respond_to: None,
            records: Vec::new(),
            tours: Vec::new(),
            partial: None,
            echo: None,
        }
    }

    fn is_leader(&self) -> bool {
        self.rank == 1
    }

    fn holds(&self, idx: usize) -> bool {
        ceil_div(idx, TRIANGLES_PER_AGENT) == self.rank
    }

    fn drop_index(&self) -> usize {
        self.k - self.rank + 1
    }

    fn owners(&self) -> usize {
        ceil_div(self.m, TRIANGLES_PER_AGENT)
    }

    fn record(&mut self, idx: usize) -> Option<&mut TriRecord> {
        self.records.iter_mut().find(|r| r.idx == idx)
    }

    /// First candidate rank at or after `from` not ruled out by the
    /// triangles stored here.
    fn next_free(&self, cand: &[Point], u: Point, v: Point, from: usize) -> usize {
        (from..cand.len())
            .find(|&i| !self.records.iter().any(|r| triangles_overlap([u, v, cand[i]], r.v)))
            .unwrap_or(cand.len())
    }

    fn leader_next(&self, view: &View<'_>, cand: &[Point], u: Point, v: Point, from: usize) -> usize {
        let mut x = from;
        loop {
            x = self.next_free(cand, u, v, x);
            if x >= cand.len() || view.empty_triangle(v, cand[x]) {
                return x;
            }
            x += 1;
        }
    }

    fn decide(&self, view: &View<'_>, cand: &[Point], u: Point, v: Point, x: usize) -> Msg {
        match cand.get(x) {
            Some(&q) => {
                let flags = (i64::from(view.is_side(v, q)) << 1) | (i64::from(view.is_side(q, u)) << 2);
                Msg::new(Tag::NewTriangle, &[token(u), token(v), token(q), flags])
            }
            None => Msg::new(Tag::NoTriangle, &[]),
        }
    }

    fn apply(&mut self, msg: &Msg, action: &mut Action, nexts: &mut Vec<usize>) -> Result<()> {
        let w = |i: usize| msg.word(i);
        match msg.tag {
            Tag::Goto => {
                action.move_to = Some(untoken(w(0)));
                self.phase = Phase::Root;
                if self.is_leader() {
                    self.root_at = Some(untoken(w(0)));
                }
            }
            Tag::NewTriangle => {
                self.phase = Phase::Explore;
                self.m += 1;
                let idx = self.m;
                if ceil_div(idx, TRIANGLES_PER_AGENT) > self.k {
                    return Err(Error::InsufficientAgents {
                        required: ceil_div(idx, TRIANGLES_PER_AGENT),
                        available: self.k,
                    });
                }
                let parent = if idx == 1 { 1 } else { self.cur };
                if idx > 1 && self.holds(parent) {
                    let r = self.record(parent).expect("parent record is held here");
                    r.child[r.cursor] = Some(idx);
                    r.cursor += 1;
                }
                if self.holds(idx) {
                    let flags = w(3);
                    self.records.push(TriRecord {
                        idx,
                        v: [untoken(w(0)), untoken(w(1)), untoken(w(2))],
                        parent,
                        side: [flags & 1 != 0, flags & 2 != 0, flags & 4 != 0],
                        child: [None; 3],
                        has_me: [false; 3],
                        cursor: if idx == 1 { 0 } else { 1 },
                        cursor3: 0,
                        finish_step: 0,
                    });
                }
                self.cur = idx;
                self.explore = None;
            }
            Tag::NoTriangle => {
                let cur = self.cur;
                if let Some(r) = self.record(cur) {
                    r.cursor += 1;
                }
                self.explore = None;
            }
            Tag::Explore => {
                let (u, v, opp) = (untoken(w(0)), untoken(w(1)), untoken(w(2)));
                self.explore = Some((u, v, opp));
                action.move_to = Some(u);
                if self.is_leader() {
                    self.choosing = true;
                }
            }
            Tag::Query => {
                if self.rank >= 2 && !self.records.is_empty() {
                    self.respond_to = Some(w(0) as usize);
                }
            }
            Tag::Next => nexts.push(w(0) as usize),
            Tag::Back => {
                action.move_to = Some(untoken(w(1)));
                self.cur = w(0) as usize;
            }
            Tag::Descend => {
                self.phase = Phase::PostOrder;
                self.cur = w(0) as usize;
            }
            Tag::Rec1 => {
                self.phase = Phase::PostOrder;
                let d = ceil_div(self.finishes + 1, 2);
                if d == self.drop_index() {
                    let mut t = TourRecord { v: w(0) as usize, parent: w(1) as usize, ..TourRecord::default() };
                    t.children = [opt_index(w(2)).map(|c| (c, Point::default())), opt_index(w(3)).map(|c| (c, Point::default()))];
                    self.partial = Some(t);
                }
            }
            Tag::Rec2 => {
                if let Some(t) = self.partial.as_mut() {
                    t.up = opt_point(w(0));
                    for (slot, word) in [(0, w(1)), (1, w(2))] {
                        if let (Some(c), Some(p)) = (t.children[slot].as_mut(), opt_point(word)) {
                            c.1 = p;
                        }
                    }
                    t.guard = opt_point(w(3));
                }
            }
            Tag::Finish => {
                let (v, parent, j, pit) = (w(0) as usize, w(1) as usize, w(2) as usize, w(3) != 0);
                self.finishes += 1;
                if j > 0 {
                    self.triplets += 1;
                }
                if let Some(mut t) = self.partial.take() {
                    t.j = j;
                    self.tours.push(t);
                }
                self.records.retain(|r| r.idx != v);
                if v != parent {
                    if let Some(r) = self.record(parent) {
                        let s = (0..3).find(|&s| r.child[s] == Some(v)).expect("child slot");
                        r.has_me[s] = pit;
                    }
                    self.cur = parent;
                } else {
                    self.phase = Phase::Tour;
                    self.cur = v;
                }
            }
            Tag::Down => {
                self.cur = w(0) as usize;
                action.move_to = Some(untoken(w(1)));
            }
            Tag::Up | Tag::End => {
                let (j, g) = if msg.tag == Tag::Up { (w(2), w(3)) } else { (w(0), w(1)) };
                let cur = self.cur;
                self.tours.retain(|t| t.v != cur);
                if j > 0 && j as usize == self.drop_index() {
                    *action = Action::idle().with_move(untoken(g)).stop(true);
                } else if msg.tag == Tag::End {
                    *action = Action::idle().stop(false);
                } else {
                    action.move_to = Some(untoken(w(1)));
                    self.cur = w(0) as usize;
                }
            }
            Tag::Id | Tag::Recruit | Tag::Move => {}
        }
        Ok(())
    }

    fn speak(&mut self, view: &View<'_>, nexts: &[usize]) -> Result<Option<Msg>> {
        let here = view.position();
        if let Some(x) = self.respond_to.take() {
            let (u, v, opp) = self.explore.expect("query during exploration");
            let cand = candidates(view, u, v, opp);
            return Ok(Some(Msg::new(Tag::Next, &[self.next_free(&cand, u, v, x) as i64])));
        }
        match self.phase {
            Phase::Setup => Ok(None),
            Phase::Root => {
                if !self.is_leader() || self.root_at != Some(here) {
                    return Ok(None);
                }
                self.root_at = None;
                let (_, w) = view
                    .incident_sides()
                    .ok_or_else(|| Error::Internal("root vertex is not a polygon vertex".into()))?;
                let q = view
                    .visible_vertices()
                    .iter()
                    .copied()
                    .find(|&q| orientation(here, w, q) == Orientation::Left && view.empty_triangle(w, q))
                    .ok_or_else(|| Error::Internal("no triangle on the first side".into()))?;
                let flags = 1 | (i64::from(view.is_side(w, q)) << 1) | (i64::from(view.is_side(q, here)) << 2);
                Ok(Some(Msg::new(Tag::NewTriangle, &[token(here), token(w), token(q), flags])))
            }
            Phase::Explore => {
                if self.is_leader() {
                    if let Some((u, v, opp)) = self.explore {
                        if self.choosing && here == u {
                            self.choosing = false;
                            let cand = candidates(view, u, v, opp);
                            let x = self.leader_next(view, &cand, u, v, 0);
                            if self.owners() < 2 || x >= cand.len() {
                                return Ok(Some(self.decide(view, &cand, u, v, x)));
                            }
                            self.query = Some(x);
                            return Ok(Some(Msg::new(Tag::Query, &[x as i64])));
                        }
                        if let Some(x) = self.query {
                            if nexts.is_empty() {
                                return Ok(None);
                            }
                            let cand = candidates(view, u, v, opp);
                            let y = nexts.iter().copied().max().unwrap().max(x);
                            let y = self.leader_next(view, &cand, u, v, y);
                            if y == x || y >= cand.len() {
                                self.query = None;
                                return Ok(Some(self.decide(view, &cand, u, v, y)));
                            }
                            self.query = Some(y);
                            return Ok(Some(Msg::new(Tag::Query, &[y as i64])));
                        }
                    }
                }
                if self.explore.is_some() || !self.holds(self.cur) {
                    return Ok(None);
                }
                let cur = self.cur;
                let (m, k) = (self.m, self.k);
                let r = self.record(cur).expect("current record is held here");
                while r.cursor < 3 && r.side[r.cursor] {
                    r.cursor += 1;
                }
                if r.cursor < 3 {
                    let (u, v) = r.edge(r.cursor);
                    let opp = r.opposite(r.cursor);
                    return Ok(Some(Msg::new(Tag::Explore, &[token(u), token(v), token(opp)])));
                }
                if !r.is_root() {
                    return Ok(Some(Msg::new(Tag::Back, &[r.parent as i64, token(r.v[0])])));
                }
                if k < ceil_div(m, 2) {
                    return Err(Error::InsufficientAgents { required: ceil_div(m, 2), available: k });
                }
                self.phase = Phase::PostOrder;
                self.speak(view, nexts)
            }
            Phase::PostOrder => {
                if !self.holds(self.cur) {
                    return Ok(None);
                }
                let cur = self.cur;
                let triplets = self.triplets;
                let r = self.record(cur).expect("current record is held here");
                match r.finish_step {
                    0 => {
                        while r.cursor3 < 3 && r.child[r.cursor3].is_none() {
                            r.cursor3 += 1;
                        }
                        if r.cursor3 < 3 {
                            let c = r.child[r.cursor3].unwrap();
                            r.cursor3 += 1;
                            return Ok(Some(Msg::new(Tag::Descend, &[c as i64])));
                        }
                        r.finish_step = 1;
                        let kids: Vec<usize> = r.child.iter().flatten().copied().collect();
                        let c = |i: usize| kids.get(i).map_or(NONE, |&c| c as i64);
                        Ok(Some(Msg::new(Tag::Rec1, &[r.idx as i64, r.parent as i64, c(0), c(1)])))
                    }
                    1 => {
                        r.finish_step = 2;
                        let toks: Vec<i64> = (0..3).filter(|&s| r.child[s].is_some()).map(|s| token(r.v[s])).collect();
                        let up = if r.is_root() { NONE } else { token(r.v[0]) };
                        let g = opt_token(r.triplet().map(|t| t.0));
                        let t = |i: usize| toks.get(i).copied().unwrap_or(NONE);
                        Ok(Some(Msg::new(Tag::Rec2, &[up, t(0), t(1), g])))
                    }
                    2 => {
                        r.finish_step = 3;
                        let (j, pit) = match r.triplet() {
                            Some((_, pit)) => (triplets + 1, pit),
                            None => (0, false),
                        };
                        Ok(Some(Msg::new(Tag::Finish, &[r.idx as i64, r.parent as i64, j as i64, i64::from(pit)])))
                    }
                    _ => Ok(None),
                }
            }
            Phase::Tour => {
                let cur = self.cur;
                let Some(t) = self.tours.iter_mut().find(|t| t.v == cur) else {
                    return Ok(None);
                };
                if t.cursor > 2 {
                    return Ok(None);
                }
                while t.cursor < 2 && t.children[t.cursor].is_none() {
                    t.cursor += 1;
                }
                if t.cursor < 2 {
                    let (c, p) = t.children[t.cursor].unwrap();
                    t.cursor += 1;
                    return Ok(Some(Msg::new(Tag::Down, &[c as i64, token(p)])));
                }
                t.cursor = 3;
                let j = t.j as i64;
                let g = opt_token(t.guard);
                if t.v == t.parent {
                    Ok(Some(Msg::new(Tag::End, &[j, g])))
                } else {
                    Ok(Some(Msg::new(Tag::Up, &[t.parent as i64, opt_token(t.up), j, g])))
                }
            }
        }
    }
}

impl Agent for SmallMemoryAgent {
    fn id(&self) -> u64 {
        self.id
    }

    fn budget(&self) -> usize {
        MEMORY_BUDGET
    }

    fn memory_words(&self) -> usize {
        let mut w = 10;
        if self.explore.is_some() {
            w += 6;
        }
        if self.is_leader() {
            w += 1 + 1 + 2 * usize::from(self.root_at.is_some());
        }
        w += usize::from(self.respond_to.is_some());
        w += self.echo.as_ref().map_or(0, |m| 1 + m.words.len());
        w += RECORD_WORDS * self.records.len();
        w += TOUR_WORDS * (self.tours.len() + usize::from(self.partial.is_some()));
        w
    }

    fn step(&mut self, look: &Look<'_>) -> Result<Action> {
        if look.round == 0 {
            let m = Msg::new(Tag::Id, &[self.id as i64]);
            self.echo = Some(m.clone());
            return Ok(Action::say(m));
        }
        let mut msgs: Vec<Msg> = look.inbox.iter().map(|(_, m)| m.clone()).collect();
        if let Some(e) = self.echo.take() {
            msgs.push(e);
        }
        let mut action = Action::idle();
        if self.k == 0 {
            let mut ids: Vec<u64> = msgs.iter().filter(|m| m.tag == Tag::Id).map(|m| m.word(0) as u64).collect();
            ids.sort_unstable();
            self.k = ids.len();
            let pos = ids.iter().position(|&x| x == self.id).expect("own id is echoed");
            self.rank = pos + 1;
            self.pred = if pos > 0 { ids[pos - 1] } else { self.id };
            self.succ = ids.get(pos + 1).copied().unwrap_or(self.id);
            if self.is_leader() {
                let here = look.view.position();
                let u = if look.view.incident_sides().is_some() {
                    here
                } else {
                    *look.view.visible_vertices().first().ok_or(Error::UnreachableStart)?
                };
                let m = Msg::new(Tag::Goto, &[token(u)]);
                self.echo = Some(m.clone());
                return Ok(Action::say(m));
            }
            return Ok(action);
        }
        let mut nexts = Vec::new();
        for m in &msgs {
            self.apply(m, &mut action, &mut nexts)?;
            if action.terminate {
                return Ok(action);
            }
        }
        if let Some(m) = self.speak(&look.view, &nexts)? {
            self.echo = Some(m.clone());
            action.broadcast = Some(m);
        }
        Ok(action)
    }
}
