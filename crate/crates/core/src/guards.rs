//! Triplet covers of the dual spanning tree and the guards they induce.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{Point, PolygonWithHoles};
use crate::triangulation::{
    build_dual, choose_root, spanning_tree, triangulate, DualGraph, RootedTree, Triangulation,
};

/// Up to three dual nodes on a path of length at most two, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub nodes: Vec<usize>,
}

impl Triplet {
    pub fn new(mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        Triplet { nodes }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.nodes.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// The array `t`: for each tree node, the triplet formed while visiting it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripletCover {
    pub t: Vec<Option<Triplet>>,
}

impl TripletCover {
    pub fn with_capacity(n: usize) -> Self {
        TripletCover { t: vec![None; n] }
    }

    pub fn get(&self, v: usize) -> Option<&Triplet> {
        self.t.get(v).and_then(|x| x.as_ref())
    }

    fn set(&mut self, v: usize, x: Option<Triplet>) {
        if v >= self.t.len() {
            self.t.resize(v + 1, None);
        }
        self.t[v] = x;
    }

    pub fn count(&self) -> usize {
        self.t.iter().flatten().count()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, &Triplet)> {
        self.t.iter().enumerate().filter_map(|(v, x)| x.as_ref().map(|x| (v, x)))
    }

    /// Entries for ids beyond the last non-empty slot are dropped, so covers of
    /// equal trees compare equal regardless of history.
    pub fn normalized(&self) -> Self {
        let mut t = self.t.clone();
        while t.last().is_some_and(|x| x.is_none()) {
            t.pop();
        }
        TripletCover { t }
    }
}

/// Triplet formed at `v` from the current entries of its children.
///
/// With `C` the children whose triplet does not contain `v`: one such child
/// `c` gives `{c, v, p(v)}`, two give `{c1, c2, v}`. A childless root forms
/// the singleton `{v}`.
pub fn find_triplet(tree: &RootedTree, cover: &TripletCover, v: usize) -> Option<Triplet> {
    let c: Vec<usize> = tree
        .children(v)
        .iter()
        .copied()
        .filter(|&c| cover.get(c).is_none_or(|t| !t.contains(v)))
        .collect();
    match c.len() {
        1 => Some(Triplet::new(vec![c[0], v, tree.parent(v)])),
        2 => Some(Triplet::new(vec![c[0], c[1], v])),
        0 if v == tree.root() && tree.is_leaf(v) => Some(Triplet::new(vec![v])),
        _ => None,
    }
}

/// Post-order application of [`find_triplet`].
pub fn compute_cover(tree: &RootedTree) -> TripletCover {
    let mut cover = TripletCover::with_capacity(tree.capacity());
    for v in tree.post_order() {
        let x = find_triplet(tree, &cover, v);
        cover.set(v, x);
    }
    cover
}

fn refresh_upwards(tree: &RootedTree, cover: &mut TripletCover, v: usize) -> usize {
    let path = tree.path_to_root(v);
    for &x in &path {
        let t = find_triplet(tree, cover, x);
        cover.set(x, t);
    }
    path.len()
}

/// Attaches leaf `l` under `v` and repairs the cover along the path to the
/// root. Returns the number of [`find_triplet`] evaluations.
pub fn add_leaf(tree: &mut RootedTree, cover: &mut TripletCover, v: usize, l: usize) -> Result<usize> {
    tree.add_leaf(v, l)?;
    cover.set(l, None);
    Ok(refresh_upwards(tree, cover, v))
}

/// Removes leaf `l` from under `v`; counterpart of [`add_leaf`].
pub fn remove_leaf(tree: &mut RootedTree, cover: &mut TripletCover, v: usize, l: usize) -> Result<usize> {
    tree.remove_leaf(v, l)?;
    cover.set(l, None);
    Ok(refresh_upwards(tree, cover, v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedTriplet {
    pub triplet: Triplet,
    pub guard_vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GuardSet {
    /// Guard vertex indices, ascending and distinct.
    pub guards: Vec<usize>,
    /// One entry per non-empty triplet, ordered by the node that formed it.
    pub assignments: Vec<GuardedTriplet>,
}

impl GuardSet {
    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    pub fn points(&self, poly: &PolygonWithHoles) -> Vec<Point> {
        self.guards.iter().map(|&g| poly.vertex(g)).collect()
    }

    pub fn from_vertices(mut guards: Vec<usize>) -> Self {
        guards.sort_unstable();
        guards.dedup();
        GuardSet { guards, assignments: Vec::new() }
    }
}

/// Lowest-index vertex shared by all member triangles.
pub fn common_vertex(t: &Triangulation, triplet: &Triplet) -> Option<usize> {
    let first = t.triangles.get(*triplet.nodes.first()?)?;
    let mut vs: Vec<usize> = first.v.to_vec();
    vs.sort_unstable();
    vs.into_iter()
        .find(|&x| triplet.nodes.iter().all(|&k| t.triangles[k].contains_vertex(x)))
}

pub fn place_guards(cover: &TripletCover, t: &Triangulation) -> Result<GuardSet> {
    let mut assignments = Vec::new();
    for (_, x) in cover.triplets() {
        let g = common_vertex(t, x)
            .ok_or_else(|| Error::Internal(format!("triplet {x} has no common vertex")))?;
        assignments.push(GuardedTriplet { triplet: x.clone(), guard_vertex: g });
    }
    let mut guards: Vec<usize> = assignments.iter().map(|a| a.guard_vertex).collect();
    guards.sort_unstable();
    guards.dedup();
    Ok(GuardSet { guards, assignments })
}

/// All intermediate products of the centralized pipeline.
#[derive(Debug, Clone)]
pub struct Solution {
    pub triangulation: Triangulation,
    pub dual: DualGraph,
    pub tree: RootedTree,
    pub cover: TripletCover,
    pub guards: GuardSet,
}

pub fn solve(poly: &PolygonWithHoles) -> Result<Solution> {
    let triangulation = triangulate(poly)?;
    let dual = build_dual(&triangulation);
    let tree = spanning_tree(&dual, choose_root(&dual))?;
    let cover = compute_cover(&tree);
    let guards = place_guards(&cover, &triangulation)?;
    Ok(Solution { triangulation, dual, tree, cover, guards })
}

pub fn cooperative_guards(poly: &PolygonWithHoles) -> Result<GuardSet> {
    Ok(solve(poly)?.guards)
}
