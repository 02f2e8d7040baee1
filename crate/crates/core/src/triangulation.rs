//! Triangulation by a maximal set of non-crossing diagonals, its dual graph
//! and binary spanning trees of the dual.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::geometry::{
    angle_cmp, proper_intersection, strictly_on_segment, triangle_area2, PolygonWithHoles, Segment,
};

/// A triangle on polygon vertices, stored counter-clockwise starting at its
/// smallest index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub v: [usize; 3],
}

impl Triangle {
    /// Normalizes orientation and rotation.
    pub fn new(poly: &PolygonWithHoles, a: usize, b: usize, c: usize) -> Self {
        let mut v = [a, b, c];
        if triangle_area2(poly.vertex(a), poly.vertex(b), poly.vertex(c)) < 0 {
            v.swap(1, 2);
        }
        let m = (0..3).min_by_key(|&i| v[i]).unwrap();
        v.rotate_left(m);
        Triangle { v }
    }

    pub fn contains_vertex(&self, x: usize) -> bool {
        self.v.contains(&x)
    }

    pub fn edges(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.v;
        [(a, b), (b, c), (c, a)]
    }

    /// Vertices shared with another triangle, ascending.
    pub fn shared(&self, other: &Triangle) -> Vec<usize> {
        let mut s: Vec<usize> = self.v.iter().copied().filter(|x| other.contains_vertex(*x)).collect();
        s.sort_unstable();
        s
    }

    /// The vertex opposite to edge `{a, b}`, if the triangle has that edge.
    pub fn opposite(&self, a: usize, b: usize) -> Option<usize> {
        if !self.contains_vertex(a) || !self.contains_vertex(b) || a == b {
            return None;
        }
        self.v.iter().copied().find(|&x| x != a && x != b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub triangles: Vec<Triangle>,
    pub diagonals: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Whether `(i, j)` may join the diagonal set `accepted`.
pub fn is_diagonal(poly: &PolygonWithHoles, accepted: &[(usize, usize)], i: usize, j: usize) -> bool {
    if i == j || poly.is_side(i, j) {
        return false;
    }
    let (a, b) = (poly.vertex(i), poly.vertex(j));
    if poly.vertices().iter().any(|&w| strictly_on_segment(w, a, b)) {
        return false;
    }
    if !poly.sees(a, b) {
        return false;
    }
    let s = Segment::new(a, b);
    !accepted.iter().any(|&(x, y)| {
        proper_intersection(&s, &Segment::new(poly.vertex(x), poly.vertex(y)))
    })
}

/// Greedy insertion over vertex pairs in lexicographic order.
pub fn triangulate(poly: &PolygonWithHoles) -> Result<Triangulation> {
    let n = poly.n();
    let mut diagonals: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if is_diagonal(poly, &diagonals, i, j) {
                diagonals.push((i, j));
            }
        }
    }
    let triangles = faces(poly, &diagonals)?;
    if triangles.len() != poly.triangle_count() {
        return Err(Error::Internal(format!(
            "triangulation has {} triangles, expected {}",
            triangles.len(),
            poly.triangle_count()
        )));
    }
    Ok(Triangulation { triangles, diagonals })
}

/// Recovers the triangles of the subdivision formed by the polygon sides and
/// `diagonals` by walking its faces.
pub fn faces(poly: &PolygonWithHoles, diagonals: &[(usize, usize)]) -> Result<Vec<Triangle>> {
    let n = poly.n();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut half: Vec<(usize, usize)> = poly.edges();
    for &(u, v) in &poly.edges() {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    for &(u, v) in diagonals {
        nbrs[u].push(v);
        nbrs[v].push(u);
        half.push((u, v));
        half.push((v, u));
    }
    for (u, list) in nbrs.iter_mut().enumerate() {
        let o = poly.vertex(u);
        list.sort_by(|&a, &b| angle_cmp(poly.vertex(a).sub(o), poly.vertex(b).sub(o)));
        list.dedup();
    }
    let next_of = |a: usize, b: usize| -> usize {
        let list = &nbrs[b];
        let k = list.iter().position(|&x| x == a).expect("neighbour lists are symmetric");
        list[(k + list.len() - 1) % list.len()]
    };
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut out = Vec::new();
    for &(a, b) in &half {
        if seen.contains(&(a, b)) {
            continue;
        }
        let mut cycle = vec![a];
        let (mut x, mut y) = (a, b);
        loop {
            seen.insert((x, y));
            if y == a {
                break;
            }
            cycle.push(y);
            if cycle.len() > n {
                return Err(Error::Internal("face walk does not close".into()));
            }
            let z = next_of(x, y);
            x = y;
            y = z;
        }
        if cycle.len() != 3 {
            return Err(Error::Internal(format!("face with {} vertices", cycle.len())));
        }
        let t = Triangle::new(poly, cycle[0], cycle[1], cycle[2]);
        if triangle_area2(poly.vertex(t.v[0]), poly.vertex(t.v[1]), poly.vertex(t.v[2])) == 0 {
            return Err(Error::invalid(format!("zero-area face {:?}", t.v)));
        }
        out.push(t);
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    /// Sorted neighbour lists, one per triangle.
    pub adjacency: Vec<Vec<usize>>,
    /// Edges as `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Hop distance between two nodes, by breadth-first search.
    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        dist[a] = 0;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                return Some(dist[v]);
            }
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Triangles are adjacent when they share an edge.
pub fn build_dual(t: &Triangulation) -> DualGraph {
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, tri) in t.triangles.iter().enumerate() {
        for (a, b) in tri.edges() {
            by_edge.entry(key(a, b)).or_default().push(k);
        }
    }
    let mut adjacency = vec![Vec::new(); t.triangles.len()];
    let mut edges = Vec::new();
    for owners in by_edge.values() {
        if let [a, b] = owners[..] {
            adjacency[a].push(b);
            adjacency[b].push(a);
            edges.push(key(a, b));
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    edges.sort_unstable();
    DualGraph { adjacency, edges }
}

/// Lowest-index node of degree at most two.
pub fn choose_root(d: &DualGraph) -> usize {
    (0..d.node_count()).find(|&v| d.degree(v) <= 2).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub parent: usize,
    pub children: Vec<usize>,
    pub depth: usize,
}

/// A rooted tree over node ids. The root is its own parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    nodes: Vec<Option<TreeNode>>,
}

impl RootedTree {
    pub fn single(root: usize) -> Self {
        let mut nodes = vec![None; root + 1];
        nodes[root] = Some(TreeNode { parent: root, children: Vec::new(), depth: 0 });
        RootedTree { root, nodes }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.get(v).is_some_and(|n| n.is_some())
    }

    pub fn node(&self, v: usize) -> &TreeNode {
        self.nodes[v].as_ref().expect("node is in the tree")
    }

    pub fn parent(&self, v: usize) -> usize {
        self.node(v).parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.node(v).children
    }

    pub fn depth(&self, v: usize) -> usize {
        self.node(v).depth
    }

    pub fn len(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Upper bound on node ids plus one.
    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, n)| n.as_ref().map(|_| i))
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children(v).is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.len().saturating_sub(1)
    }

    /// Attaches a new leaf `l` under `v`.
    pub fn add_leaf(&mut self, v: usize, l: usize) -> Result<()> {
        if !self.contains(v) {
            return Err(Error::invalid(format!("node {v} is not in the tree")));
        }
        if self.contains(l) {
            return Err(Error::invalid(format!("node {l} is already in the tree")));
        }
        if self.children(v).len() >= 2 {
            return Err(Error::invalid(format!("node {v} already has two children")));
        }
        if l >= self.nodes.len() {
            self.nodes.resize(l + 1, None);
        }
        let depth = self.depth(v) + 1;
        self.nodes[l] = Some(TreeNode { parent: v, children: Vec::new(), depth });
        self.nodes[v].as_mut().unwrap().children.push(l);
        Ok(())
    }

    /// Detaches the leaf `l` from its parent `v`.
    pub fn remove_leaf(&mut self, v: usize, l: usize) -> Result<()> {
        if !self.contains(l) || l == self.root || self.parent(l) != v {
            return Err(Error::invalid(format!("node {l} is not a child of {v}")));
        }
        if !self.is_leaf(l) {
            return Err(Error::invalid(format!("node {l} is not a leaf")));
        }
        self.nodes[l] = None;
        self.nodes[v].as_mut().unwrap().children.retain(|&c| c != l);
        Ok(())
    }

    /// Children before parents; siblings in stored order.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, 0usize)];
        while let Some((v, k)) = stack.pop() {
            let ch = self.children(v);
            if k < ch.len() {
                stack.push((v, k + 1));
                stack.push((ch[k], 0));
            } else {
                out.push(v);
            }
        }
        out
    }

    /// Parents before children, in depth-first order.
    pub fn pre_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in self.children(v).iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// `v`, its parent, and so on up to the root.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut x = v;
        while x != self.root {
            x = self.parent(x);
            out.push(x);
        }
        out
    }

    pub fn max_children(&self) -> usize {
        self.node_ids().map(|v| self.children(v).len()).max().unwrap_or(0)
    }
}

/// Depth-first spanning tree of the dual, neighbours visited in ascending
/// order.
pub fn spanning_tree(d: &DualGraph, root: usize) -> Result<RootedTree> {
    if root >= d.node_count() {
        return Err(Error::invalid(format!("root {root} is not a dual node")));
    }
    if d.degree(root) > 2 {
        return Err(Error::invalid(format!("root {root} has dual degree {}", d.degree(root))));
    }
    let mut tree = RootedTree::single(root);
    tree.nodes.resize(d.node_count(), None);
    let mut stack = vec![(root, 0usize)];
    while let Some(&mut (v, ref mut k)) = stack.last_mut() {
        let nb = d.neighbors(v);
        if *k < nb.len() {
            let w = nb[*k];
            *k += 1;
            if !tree.contains(w) {
                tree.add_leaf(v, w)?;
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
    Ok(tree)
}

/// Triangles indexed by the edges they own, both orientations collapsed.
pub fn edge_owners(t: &Triangulation) -> HashMap<(usize, usize), Vec<usize>> {
    let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, tri) in t.triangles.iter().enumerate() {
        for (a, b) in tri.edges() {
            m.entry(key(a, b)).or_default().push(k);
        }
    }
    m
}
