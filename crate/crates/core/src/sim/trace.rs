//! Simulation traces and their text form.

use std::fmt::{self, Write as _};

use crate::geometry::{Point, N_MAX};

/// Message kinds. The kind travels with the message and is not charged
/// against the payload word limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Id,
    Goto,
    Recruit,
    Move,
    Explore,
    Query,
    Next,
    NewTriangle,
    NoTriangle,
    Back,
    Descend,
    Rec1,
    Rec2,
    Finish,
    Down,
    Up,
    End,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Id => "ID",
            Tag::Goto => "GOTO",
            Tag::Recruit => "RECRUIT",
            Tag::Move => "MOVE",
            Tag::Explore => "EXPLORE",
            Tag::Query => "QUERY",
            Tag::Next => "NEXT",
            Tag::NewTriangle => "NEWTRI",
            Tag::NoTriangle => "NOTRI",
            Tag::Back => "BACK",
            Tag::Descend => "DESCEND",
            Tag::Rec1 => "REC1",
            Tag::Rec2 => "REC2",
            Tag::Finish => "FINISH",
            Tag::Down => "DOWN",
            Tag::Up => "UP",
            Tag::End => "END",
        }
    }
}

/// A broadcast payload: a kind plus a few machine words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Msg {
    pub tag: Tag,
    pub words: Vec<i64>,
}

impl Msg {
    pub fn new(tag: Tag, words: &[i64]) -> Self {
        Msg { tag, words: words.to_vec() }
    }

    pub fn word(&self, i: usize) -> i64 {
        self.words.get(i).copied().unwrap_or(0)
    }
}

impl fmt::Display for Msg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.words.iter().map(|x| x.to_string()).collect();
        write!(f, "{}:{}", self.tag.name(), w.join(","))
    }
}

/// Packs a grid point into one word.
pub fn token(p: Point) -> i64 {
    p.x * (N_MAX + 1) + p.y
}

pub fn untoken(t: i64) -> Point {
    Point::new(t / (N_MAX + 1), t % (N_MAX + 1))
}

/// Sentinel for an absent token or index.
pub const NONE: i64 = -1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Look { round: usize, id: u64, at: Point },
    Bcast { round: usize, sender: u64, msg: Msg, receivers: Vec<u64> },
    Move { round: usize, id: u64, from: Point, to: Point },
}

impl Event {
    pub fn round(&self) -> usize {
        match self {
            Event::Look { round, .. } | Event::Bcast { round, .. } | Event::Move { round, .. } => {
                *round
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryRecord {
    pub id: u64,
    pub peak: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTrace {
    pub polygon_hash: String,
    pub mode: String,
    pub seed: u64,
    /// Agent ids in deployment order.
    pub agents: Vec<u64>,
    pub leader: Option<u64>,
    pub events: Vec<Event>,
    pub total_rounds: usize,
    pub total_broadcasts: usize,
    pub memory: Vec<MemoryRecord>,
    /// Final guard positions, ascending.
    pub guards: Vec<Point>,
}

impl SimTrace {
    pub fn peak_of(&self, id: u64) -> Option<usize> {
        self.memory.iter().find(|m| m.id == id).map(|m| m.peak)
    }

    pub fn leader_peak(&self) -> usize {
        self.leader.and_then(|l| self.peak_of(l)).unwrap_or(0)
    }

    /// Largest peak over all agents other than the leader.
    pub fn max_follower_peak(&self) -> usize {
        self.memory
            .iter()
            .filter(|m| Some(m.id) != self.leader)
            .map(|m| m.peak)
            .max()
            .unwrap_or(0)
    }

    pub fn max_peak(&self) -> usize {
        self.memory.iter().map(|m| m.peak).max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "TRACE 1");
        let _ = writeln!(s, "polygon {}", self.polygon_hash);
        let _ = writeln!(s, "mode {}", self.mode);
        let _ = writeln!(s, "seed {}", self.seed);
        let ids: Vec<String> = self.agents.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(s, "agents {} {}", self.agents.len(), ids.join(" "));
        if let Some(l) = self.leader {
            let _ = writeln!(s, "leader {l}");
        }
        for e in &self.events {
            match e {
                Event::Look { round, id, at } => {
                    let _ = writeln!(s, "R {round} LOOK {id} {} {}", at.x, at.y);
                }
                Event::Bcast { round, sender, msg, receivers } => {
                    let r: Vec<String> = receivers.iter().map(|x| x.to_string()).collect();
                    let r = if r.is_empty() { "-".to_string() } else { r.join(",") };
                    let _ = writeln!(s, "R {round} BCAST {sender} {msg} -> {r}");
                }
                Event::Move { round, id, from, to } => {
                    let _ = writeln!(s, "R {round} MOVE {id} {} {} {} {}", from.x, from.y, to.x, to.y);
                }
            }
        }
        for m in &self.memory {
            let _ = writeln!(s, "MEM {} {} {}", m.id, m.peak, m.budget);
        }
        for g in &self.guards {
            let _ = writeln!(s, "GUARD {} {}", g.x, g.y);
        }
        let _ = writeln!(s, "END rounds {} broadcasts {}", self.total_rounds, self.total_broadcasts);
        s
    }
}
