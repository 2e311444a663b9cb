//! Finite connected graphs with every vertex of valence at least three.
//!
//! Edges carry an orientation only to name their two directions: a
//! [`DirEdge`] is an edge together with a direction, and reversing it is an
//! involution without fixed points. Each graph fixes a breadth-first spanning
//! tree rooted at vertex 0; the non-tree edges, in index order, give the basis
//! of mod-2 homology used everywhere else.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Graphs are limited to 64 vertices and 64 edges so vertex and edge sets fit
/// in a `u64` mask.
pub const MAX_CELLS: usize = 64;

/// An edge with a direction: `2·edge` is the edge as stored, `2·edge + 1` its
/// reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirEdge(u32);

impl DirEdge {
    pub fn forward(edge: EdgeId) -> Self {
        DirEdge((edge as u32) << 1)
    }

    pub fn backward(edge: EdgeId) -> Self {
        DirEdge(((edge as u32) << 1) | 1)
    }

    pub fn new(edge: EdgeId, reversed: bool) -> Self {
        DirEdge(((edge as u32) << 1) | reversed as u32)
    }

    pub fn edge(self) -> EdgeId {
        (self.0 >> 1) as EdgeId
    }

    pub fn is_reversed(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        DirEdge(self.0 ^ 1)
    }

    pub fn code(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
}

#[derive(Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<DirEdge>>,
    in_tree: Vec<bool>,
    basis_index: Vec<Option<usize>>,
    basis_edges: Vec<EdgeId>,
    parent: Vec<Option<DirEdge>>,
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | '~' | '#'))
}

impl Graph {
    /// Builds and validates a graph from vertex names and `(name, tail, head)`
    /// edges.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let bad = |m: String| Error::InvalidGraph(m);
        if vertices.is_empty() {
            return Err(bad("no vertices".into()));
        }
        if vertices.len() > MAX_CELLS || edges.len() > MAX_CELLS {
            return Err(bad(format!("at most {MAX_CELLS} vertices and edges supported")));
        }
        let mut seen = std::collections::HashSet::new();
        for name in vertices.iter().chain(edges.iter().map(|e| &e.name)) {
            if !valid_name(name) {
                return Err(bad(format!("invalid name {name:?}")));
            }
        }
        for v in &vertices {
            if !seen.insert(("v", v.as_str())) {
                return Err(bad(format!("duplicate vertex {v}")));
            }
        }
        for e in &edges {
            if !seen.insert(("e", e.name.as_str())) {
                return Err(bad(format!("duplicate edge {}", e.name)));
            }
            if e.tail >= vertices.len() || e.head >= vertices.len() {
                return Err(bad(format!("edge {} has an endpoint out of range", e.name)));
            }
        }

        let mut out = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.tail].push(DirEdge::forward(i));
            out[e.head].push(DirEdge::backward(i));
        }
        for (v, dirs) in out.iter().enumerate() {
            if dirs.len() < 3 {
                return Err(bad(format!(
                    "vertex {} has valence {} (need at least 3)",
                    vertices[v],
                    dirs.len()
                )));
            }
        }

        // Breadth-first spanning tree from vertex 0.
        let mut parent: Vec<Option<DirEdge>> = vec![None; vertices.len()];
        let mut reached = vec![false; vertices.len()];
        let mut in_tree = vec![false; edges.len()];
        let mut queue = std::collections::VecDeque::from([0usize]);
        reached[0] = true;
        while let Some(v) = queue.pop_front() {
            for &d in &out[v] {
                let w = if d.is_reversed() { edges[d.edge()].tail } else { edges[d.edge()].head };
                if !reached[w] {
                    reached[w] = true;
                    in_tree[d.edge()] = true;
                    parent[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(bad("graph is not connected".into()));
        }
        let mut basis_index = vec![None; edges.len()];
        let mut basis_edges = Vec::new();
        for (i, t) in in_tree.iter().enumerate() {
            if !t {
                basis_index[i] = Some(basis_edges.len());
                basis_edges.push(i);
            }
        }
        Ok(Graph { vertices, edges, out, in_tree, basis_index, basis_edges, parent })
    }

    /// Convenience constructor from string slices; endpoints are vertex names.
    pub fn from_names(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |n: &str| {
            vs.iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {n}")))
        };
        let es = edges
            .iter()
            .map(|(name, t, h)| Ok(Edge { name: name.to_string(), tail: find(t)?, head: find(h)? }))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(vs, es)
    }

    /// The rose `R_n`: one vertex `o` and petals `a, b, c, …`.
    pub fn rose(n: usize) -> Self {
        assert!((2..=26).contains(&n), "rose rank must be in 2..=26");
        let edges = (0..n)
            .map(|i| Edge { name: ((b'a' + i as u8) as char).to_string(), tail: 0, head: 0 })
            .collect();
        Graph::new(vec!["o".to_string()], edges).expect("rose is a valid graph")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e].name
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn find_edge(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn tail(&self, d: DirEdge) -> VertexId {
        let e = &self.edges[d.edge()];
        if d.is_reversed() {
            e.head
        } else {
            e.tail
        }
    }

    pub fn head(&self, d: DirEdge) -> VertexId {
        self.tail(d.inverse())
    }

    /// Directed edges leaving `v` (a loop at `v` contributes both directions).
    pub fn out_edges(&self, v: VertexId) -> &[DirEdge] {
        &self.out[v]
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.out[v].len()
    }

    pub fn is_loop_edge(&self, e: EdgeId) -> bool {
        self.edges[e].tail == self.edges[e].head
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.in_tree[e]
    }

    /// Non-tree edges; edge `basis_edges()[i]` carries homology coordinate `i`.
    pub fn basis_edges(&self) -> &[EdgeId] {
        &self.basis_edges
    }

    /// The homology coordinate mask contributed by one crossing of `e`.
    pub fn class_mask(&self, e: EdgeId) -> u64 {
        self.basis_index[e].map_or(0, |i| 1u64 << i)
    }

    /// Tree path from the root (vertex 0) to `v`.
    pub fn tree_path(&self, v: VertexId) -> Vec<DirEdge> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(d) = self.parent[cur] {
            path.push(d);
            cur = self.tail(d);
        }
        path.reverse();
        path
    }

    /// The fundamental cycle of basis coordinate `i`, as a closed path at the root.
    pub fn fundamental_cycle(&self, i: usize) -> Vec<DirEdge> {
        let e = self.basis_edges[i];
        let d = DirEdge::forward(e);
        let mut path = self.tree_path(self.tail(d));
        path.push(d);
        path.extend(self.tree_path(self.head(d)).iter().rev().map(|x| x.inverse()));
        path
    }

    /// Token for a directed edge in the text format: `e` or `e'`.
    pub fn dir_token(&self, d: DirEdge) -> String {
        if d.is_reversed() {
            format!("{}'", self.edges[d.edge()].name)
        } else {
            self.edges[d.edge()].name.clone()
        }
    }

    pub fn parse_dir_token(&self, token: &str) -> Option<DirEdge> {
        match token.strip_suffix('\'') {
            Some(name) => self.find_edge(name).map(DirEdge::backward),
            None => self.find_edge(token).map(DirEdge::forward),
        }
    }

    pub fn format_word(&self, word: &[DirEdge]) -> String {
        word.iter().map(|&d| self.dir_token(d)).collect::<Vec<_>>().join(" ")
    }

    /// Mask of vertices touched by the given directed edges.
    pub fn vertex_mask(&self, word: &[DirEdge]) -> u64 {
        word.iter().fold(0, |m, &d| m | 1 << self.tail(d) | 1 << self.head(d))
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
        self.edges.hash(state);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn theta() -> Graph {
        Graph::from_names(&["p", "q"], &[("x", "p", "q"), ("y", "p", "q"), ("z", "p", "q")]).unwrap()
    }

    pub fn barbell() -> Graph {
        Graph::from_names(&["p", "q"], &[("u", "p", "p"), ("w", "p", "q"), ("v", "q", "q")]).unwrap()
    }

    #[test]
    fn rose_basics() {
        let r = Graph::rose(3);
        assert_eq!(r.rank(), 3);
        assert_eq!(r.valence(0), 6);
        assert_eq!(r.basis_edges(), &[0, 1, 2]);
        assert_eq!(r.fundamental_cycle(1), vec![DirEdge::forward(1)]);
    }

    #[test]
    fn spanning_tree_and_cycles() {
        let g = theta();
        assert_eq!(g.rank(), 2);
        assert!(g.is_tree_edge(0));
        assert_eq!(g.basis_edges(), &[1, 2]);
        let c = g.fundamental_cycle(0);
        assert_eq!(g.tail(c[0]), 0);
        assert_eq!(g.head(*c.last().unwrap()), 0);
        for w in c.windows(2) {
            assert_eq!(g.head(w[0]), g.tail(w[1]));
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(Graph::from_names(&["p"], &[("a", "p", "p")]).is_err());
        assert!(Graph::from_names(&["p", "q"], &[("a", "p", "p"), ("b", "q", "q"), ("c", "p", "p")]).is_err());
        assert!(Graph::from_names(&["p", "q", "r"], &[("a", "p", "q"), ("b", "q", "r"), ("c", "r", "p")]).is_err());
        assert!(Graph::from_names(&["p"], &[("a", "p", "p"), ("a", "p", "p")]).is_err());
        assert!(Graph::from_names(&["p"], &[("a'", "p", "p"), ("b", "p", "p")]).is_err());
    }

    #[test]
    fn tokens() {
        let g = barbell();
        let d = g.parse_dir_token("w'").unwrap();
        assert_eq!(d, DirEdge::backward(1));
        assert_eq!(g.dir_token(d), "w'");
        assert_eq!(g.tail(d), 1);
        assert!(g.parse_dir_token("nope").is_none());
    }
}
