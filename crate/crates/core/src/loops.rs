//! Edge paths, free and cyclic reduction, and loops in canonical form.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{DirEdge, EdgeId, Graph, VertexId};
use crate::rational::Q;

/// A path of directed edges with matching endpoints. A path with no edges
/// still has a position (`start`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath {
    start: VertexId,
    edges: Vec<DirEdge>,
}

impl EdgePath {
    pub fn new(graph: &Graph, start: VertexId, edges: Vec<DirEdge>) -> Result<Self> {
        if start >= graph.num_vertices() {
            return Err(Error::MalformedPath(format!("start vertex {start} out of range")));
        }
        check_word(graph, &edges)?;
        if let Some(&first) = edges.first() {
            if graph.tail(first) != start {
                return Err(Error::MalformedPath(format!(
                    "path starts at {} but its first edge leaves {}",
                    graph.vertex_name(start),
                    graph.vertex_name(graph.tail(first))
                )));
            }
        }
        Ok(EdgePath { start, edges })
    }

    pub fn trivial(v: VertexId) -> Self {
        EdgePath { start: v, edges: Vec::new() }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self, graph: &Graph) -> VertexId {
        self.edges.last().map_or(self.start, |&d| graph.head(d))
    }

    pub fn edges(&self) -> &[DirEdge] {
        &self.edges
    }

    pub fn is_closed(&self, graph: &Graph) -> bool {
        self.end(graph) == self.start
    }

    /// Free reduction: removes every `e ē` subword. Endpoints are unchanged.
    pub fn tighten(&self) -> EdgePath {
        EdgePath { start: self.start, edges: free_reduce(&self.edges) }
    }

    pub fn reverse(&self, graph: &Graph) -> EdgePath {
        EdgePath {
            start: self.end(graph),
            edges: self.edges.iter().rev().map(|d| d.inverse()).collect(),
        }
    }

    pub fn length(&self, lengths: &[Q]) -> Q {
        self.edges.iter().map(|d| &lengths[d.edge()]).sum()
    }
}

fn check_word(graph: &Graph, word: &[DirEdge]) -> Result<()> {
    if let Some(d) = word.iter().find(|d| d.edge() >= graph.num_edges()) {
        return Err(Error::MalformedPath(format!("edge index {} out of range", d.edge())));
    }
    for (i, w) in word.windows(2).enumerate() {
        if graph.head(w[0]) != graph.tail(w[1]) {
            return Err(Error::MalformedPath(format!(
                "{} ends at {} but {} (position {}) starts at {}",
                graph.dir_token(w[0]),
                graph.vertex_name(graph.head(w[0])),
                graph.dir_token(w[1]),
                i + 1,
                graph.vertex_name(graph.tail(w[1]))
            )));
        }
    }
    Ok(())
}

pub fn free_reduce(word: &[DirEdge]) -> Vec<DirEdge> {
    let mut out: Vec<DirEdge> = Vec::with_capacity(word.len());
    for &d in word {
        if out.last() == Some(&d.inverse()) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    out
}

/// Free reduction followed by stripping cancelling first/last pairs.
pub fn cyclic_reduce(word: &[DirEdge]) -> Vec<DirEdge> {
    let reduced = free_reduce(word);
    let mut lo = 0;
    let mut hi = reduced.len();
    while hi - lo >= 2 && reduced[lo] == reduced[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    reduced[lo..hi].to_vec()
}

fn min_rotation(word: &[DirEdge]) -> Vec<DirEdge> {
    let n = word.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            (0..n)
                .map(|k| word[(i + k) % n])
                .cmp((0..n).map(|k| word[(j + k) % n]))
        })
        .unwrap_or(0);
    (0..n).map(|k| word[(best + k) % n]).collect()
}

/// Lexicographically least rotation of the word or of its reverse.
pub fn canonical_cyclic(word: &[DirEdge]) -> Vec<DirEdge> {
    let forward = min_rotation(word);
    let rev: Vec<DirEdge> = word.iter().rev().map(|d| d.inverse()).collect();
    let backward = min_rotation(&rev);
    forward.min(backward)
}

/// A nontrivial immersed loop, stored cyclically reduced and normalized up to
/// rotation and reversal, so equal loops compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loop(Vec<DirEdge>);

impl Loop {
    /// Tightens a closed edge path to a loop; `None` when it is null-homotopic.
    pub fn from_closed(graph: &Graph, word: &[DirEdge]) -> Result<Option<Loop>> {
        check_word(graph, word)?;
        if let (Some(&first), Some(&last)) = (word.first(), word.last()) {
            if graph.head(last) != graph.tail(first) {
                return Err(Error::MalformedPath(format!(
                    "loop is not closed: ends at {} but starts at {}",
                    graph.vertex_name(graph.head(last)),
                    graph.vertex_name(graph.tail(first))
                )));
            }
        }
        Ok(Loop::from_closed_unchecked(word))
    }

    /// Parses whitespace-separated tokens (`e` or `e'`) into a loop.
    pub fn parse(graph: &Graph, text: &str) -> Result<Option<Loop>> {
        let word = text
            .split_whitespace()
            .map(|t| {
                graph
                    .parse_dir_token(t)
                    .ok_or_else(|| Error::MalformedPath(format!("unknown edge token {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Loop::from_closed(graph, &word)
    }

    pub(crate) fn from_closed_unchecked(word: &[DirEdge]) -> Option<Loop> {
        let reduced = cyclic_reduce(word);
        if reduced.is_empty() {
            None
        } else {
            Some(Loop(canonical_cyclic(&reduced)))
        }
    }

    pub fn edges(&self) -> &[DirEdge] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The same loop traversed backwards, as an explicit word (the canonical
    /// form itself is reversal invariant).
    pub fn reversed_word(&self) -> Vec<DirEdge> {
        self.0.iter().rev().map(|d| d.inverse()).collect()
    }

    /// Number of times each edge is crossed, in either direction.
    pub fn crossings(&self, num_edges: usize) -> Vec<u8> {
        let mut c = vec![0u8; num_edges];
        for d in &self.0 {
            c[d.edge()] += 1;
        }
        c
    }

    pub fn max_crossings(&self, num_edges: usize) -> u8 {
        self.crossings(num_edges).into_iter().max().unwrap_or(0)
    }

    /// Sum of edge values with multiplicity: the length under a metric, or
    /// the value of a tangent vector.
    pub fn weigh(&self, values: &[Q]) -> Q {
        self.0.iter().map(|d| &values[d.edge()]).sum()
    }

    pub fn edge_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, d| m | 1 << d.edge())
    }

    /// Crosses every edge and every vertex at most once.
    pub fn is_embedded(&self, graph: &Graph) -> bool {
        let mut seen_v = 0u64;
        let mut seen_e = 0u64;
        for d in &self.0 {
            let v = graph.tail(*d);
            if seen_v >> v & 1 == 1 || seen_e >> d.edge() & 1 == 1 {
                return false;
            }
            seen_v |= 1 << v;
            seen_e |= 1 << d.edge();
        }
        true
    }

    pub fn edge_set(&self) -> Vec<EdgeId> {
        let mut es: Vec<EdgeId> = self.0.iter().map(|d| d.edge()).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    pub fn display<'a>(&'a self, graph: &'a Graph) -> impl fmt::Display + 'a {
        LoopDisplay { lp: self, graph }
    }
}

impl fmt::Debug for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Loop{:?}", self.0.iter().map(|d| d.code()).collect::<Vec<_>>())
    }
}

struct LoopDisplay<'a> {
    lp: &'a Loop,
    graph: &'a Graph,
}

impl fmt::Display for LoopDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.graph.format_word(self.lp.edges()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{barbell, theta};
    use crate::rational::q;

    fn lp(g: &Graph, s: &str) -> Option<Loop> {
        Loop::parse(g, s).unwrap()
    }

    #[test]
    fn tighten_examples() {
        let r = Graph::rose(2);
        assert_eq!(lp(&r, "a a' b"), lp(&r, "b"));
        assert_eq!(lp(&r, "a b b' a"), lp(&r, "a a"));
        // cancellation across the wrap point
        assert_eq!(lp(&r, "a b a'"), lp(&r, "b"));
        assert_eq!(lp(&r, "a a'"), None);
        assert_eq!(lp(&r, "a b a' b'").unwrap().len(), 4);
    }

    #[test]
    fn canonical_form_is_rotation_and_reversal_invariant() {
        let r = Graph::rose(2);
        let x = lp(&r, "a b b a'  a").unwrap();
        assert_eq!(lp(&r, "b a b").unwrap(), x);
        assert_eq!(lp(&r, "b' a' b'").unwrap(), x);
        assert_ne!(lp(&r, "a b").unwrap(), lp(&r, "a b'").unwrap());
    }

    #[test]
    fn malformed_paths() {
        let g = barbell();
        assert!(Loop::parse(&g, "u v").is_err());
        assert!(Loop::parse(&g, "w").is_err());
        assert!(Loop::parse(&g, "u w v w'").unwrap().is_some());
        assert!(EdgePath::new(&g, 1, vec![DirEdge::forward(0)]).is_err());
    }

    #[test]
    fn lengths_and_crossings() {
        let r = Graph::rose(2);
        let l = vec![q(1, 2), q(1, 2)];
        assert_eq!(lp(&r, "a b").unwrap().weigh(&l), q(1, 1));
        assert_eq!(lp(&r, "a b b'").unwrap().weigh(&l), q(1, 2));
        let tau = vec![q(1, 1), q(-1, 1)];
        assert_eq!(lp(&r, "a b").unwrap().weigh(&tau), q(0, 1));
        assert_eq!(lp(&r, "a b'").unwrap().weigh(&tau), q(0, 1));
        let g = theta();
        let c = lp(&g, "x y'").unwrap();
        assert!(c.is_embedded(&g));
        assert_eq!(c.crossings(3), vec![1, 1, 0]);
    }

    #[test]
    fn tighten_open_path() {
        let g = barbell();
        let p = EdgePath::new(&g, 0, vec![DirEdge::forward(0), DirEdge::backward(0), DirEdge::forward(1)]).unwrap();
        let t = p.tighten();
        assert_eq!(t.edges(), &[DirEdge::forward(1)]);
        assert_eq!(t.end(&g), 1);
        assert_eq!(t.tighten(), t);
    }
}
