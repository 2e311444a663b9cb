//! Candidate loops: embedded circles, figure eights and barbells.
//!
//! Circles come from a depth-first search anchored at their lowest-index
//! edge. Figure eights pair circles meeting in exactly one vertex; barbells
//! pair vertex-disjoint circles with every embedded arc between them whose
//! interior avoids both.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::graph::{DirEdge, Graph, VertexId};
use crate::loops::Loop;
use crate::metric::Metric;
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CandidateKind {
    Embedded,
    FigureEight,
    Barbell,
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateKind::Embedded => "embedded",
            CandidateKind::FigureEight => "figure-eight",
            CandidateKind::Barbell => "barbell",
        })
    }
}

/// An embedded circle with its vertex and edge sets as masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub word: Vec<DirEdge>,
    pub vertices: u64,
    pub edges: u64,
}

impl Circle {
    fn new(graph: &Graph, word: Vec<DirEdge>) -> Self {
        let vertices = graph.vertex_mask(&word);
        let edges = word.iter().fold(0u64, |m, d| m | 1 << d.edge());
        Circle { word, vertices, edges }
    }

    pub fn as_loop(&self) -> Loop {
        Loop::from_closed_unchecked(&self.word).expect("circles are nontrivial")
    }

    /// The circle as a closed word based at `p` (which must lie on it).
    pub fn based_at(&self, graph: &Graph, p: VertexId) -> Vec<DirEdge> {
        let i = self
            .word
            .iter()
            .position(|&d| graph.tail(d) == p)
            .expect("basepoint lies on the circle");
        self.word[i..].iter().chain(&self.word[..i]).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    Circle,
    FigureEight { u: Loop, v: Loop },
    Barbell { u: Loop, v: Loop, arc: Vec<DirEdge> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub lp: Loop,
    pub kind: CandidateKind,
    pub support: Support,
}

/// All embedded circles, deduplicated, in canonical loop order.
pub fn embedded_circles(graph: &Graph) -> Vec<Circle> {
    let mut found: BTreeMap<Loop, Circle> = BTreeMap::new();
    for e0 in 0..graph.num_edges() {
        let first = DirEdge::forward(e0);
        let start = graph.tail(first);
        if graph.is_loop_edge(e0) {
            let c = Circle::new(graph, vec![first]);
            found.insert(c.as_loop(), c);
            continue;
        }
        let mut path = vec![first];
        let visited = 1u64 << start | 1u64 << graph.head(first);
        extend_circle(graph, e0, start, visited, &mut path, &mut found);
    }
    found.into_values().collect()
}

fn extend_circle(
    graph: &Graph,
    e0: usize,
    start: VertexId,
    visited: u64,
    path: &mut Vec<DirEdge>,
    found: &mut BTreeMap<Loop, Circle>,
) {
    let here = graph.head(*path.last().unwrap());
    for &d in graph.out_edges(here) {
        if d.edge() <= e0 || graph.is_loop_edge(d.edge()) {
            continue;
        }
        let next = graph.head(d);
        if next == start {
            path.push(d);
            let c = Circle::new(graph, path.clone());
            found.insert(c.as_loop(), c);
            path.pop();
        } else if visited >> next & 1 == 0 {
            path.push(d);
            extend_circle(graph, e0, start, visited | 1 << next, path, found);
            path.pop();
        }
    }
}

/// Every candidate loop of `graph`, sorted by kind and then by canonical loop.
pub fn enumerate_candidates(graph: &Graph) -> Vec<Candidate> {
    let circles = embedded_circles(graph);
    let mut out: BTreeMap<(CandidateKind, Loop), Support> = BTreeMap::new();

    for c in &circles {
        out.insert((CandidateKind::Embedded, c.as_loop()), Support::Circle);
    }

    for (i, u) in circles.iter().enumerate() {
        for v in &circles[i + 1..] {
            let shared = u.vertices & v.vertices;
            if shared.count_ones() == 1 {
                let p = shared.trailing_zeros() as VertexId;
                let up = u.based_at(graph, p);
                let vp = v.based_at(graph, p);
                let vp_rev: Vec<DirEdge> = vp.iter().rev().map(|d| d.inverse()).collect();
                for second in [vp, vp_rev] {
                    let word: Vec<DirEdge> = up.iter().chain(&second).copied().collect();
                    let lp = Loop::from_closed_unchecked(&word).expect("figure eights are nontrivial");
                    out.insert(
                        (CandidateKind::FigureEight, lp),
                        Support::FigureEight { u: u.as_loop(), v: v.as_loop() },
                    );
                }
            } else if shared == 0 {
                for arc in arcs_between(graph, u, v) {
                    let p = graph.tail(arc[0]);
                    let q = graph.head(*arc.last().unwrap());
                    let up = u.based_at(graph, p);
                    let vq = v.based_at(graph, q);
                    let vq_rev: Vec<DirEdge> = vq.iter().rev().map(|d| d.inverse()).collect();
                    let back: Vec<DirEdge> = arc.iter().rev().map(|d| d.inverse()).collect();
                    for middle in [vq, vq_rev] {
                        let word: Vec<DirEdge> =
                            up.iter().chain(&arc).chain(&middle).chain(&back).copied().collect();
                        let lp = Loop::from_closed_unchecked(&word).expect("barbells are nontrivial");
                        out.insert(
                            (CandidateKind::Barbell, lp),
                            Support::Barbell { u: u.as_loop(), v: v.as_loop(), arc: arc.clone() },
                        );
                    }
                }
            }
        }
    }

    out.into_iter()
        .map(|((kind, lp), support)| Candidate { lp, kind, support })
        .collect()
}

/// Embedded arcs from a vertex of `u` to a vertex of `v` with interior
/// disjoint from both circles.
fn arcs_between(graph: &Graph, u: &Circle, v: &Circle) -> Vec<Vec<DirEdge>> {
    let mut arcs = Vec::new();
    let blocked = u.vertices | v.vertices;
    for p in 0..graph.num_vertices() {
        if u.vertices >> p & 1 == 0 {
            continue;
        }
        let mut path = Vec::new();
        walk_arc(graph, p, blocked, u.edges, v, &mut path, &mut arcs);
    }
    arcs
}

fn walk_arc(
    graph: &Graph,
    here: VertexId,
    visited: u64,
    u_edges: u64,
    v: &Circle,
    path: &mut Vec<DirEdge>,
    arcs: &mut Vec<Vec<DirEdge>>,
) {
    for &d in graph.out_edges(here) {
        if (u_edges | v.edges) >> d.edge() & 1 == 1 || graph.is_loop_edge(d.edge()) {
            continue;
        }
        let next = graph.head(d);
        if v.vertices >> next & 1 == 1 {
            path.push(d);
            arcs.push(path.clone());
            path.pop();
        } else if visited >> next & 1 == 0 {
            path.push(d);
            walk_arc(graph, next, visited | 1 << next, u_edges, v, path, arcs);
            path.pop();
        }
    }
}

/// Checks a candidate against the definition of its kind.
pub fn check_candidate(graph: &Graph, c: &Candidate) -> bool {
    let crossings = c.lp.crossings(graph.num_edges());
    let once = |lp: &Loop| lp.edge_set().iter().all(|&e| crossings[e] == 1);
    let circle_vertices = |lp: &Loop| graph.vertex_mask(lp.edges());
    match &c.support {
        Support::Circle => c.kind == CandidateKind::Embedded && c.lp.is_embedded(graph),
        Support::FigureEight { u, v } => {
            c.kind == CandidateKind::FigureEight
                && u.is_embedded(graph)
                && v.is_embedded(graph)
                && (circle_vertices(u) & circle_vertices(v)).count_ones() == 1
                && once(u)
                && once(v)
                && c.lp.edge_mask() == u.edge_mask() | v.edge_mask()
        }
        Support::Barbell { u, v, arc } => {
            let (vu, vv) = (circle_vertices(u), circle_vertices(v));
            let arc_mask = arc.iter().fold(0u64, |m, d| m | 1 << d.edge());
            let interior = arc[..arc.len() - 1].iter().fold(0u64, |m, &d| m | 1 << graph.head(d));
            let arc_embedded = {
                let mut seen = 1u64 << graph.tail(arc[0]);
                arc.iter().all(|&d| {
                    let h = graph.head(d);
                    let fresh = seen >> h & 1 == 0;
                    seen |= 1 << h;
                    fresh
                })
            };
            c.kind == CandidateKind::Barbell
                && u.is_embedded(graph)
                && v.is_embedded(graph)
                && vu & vv == 0
                && vu >> graph.tail(arc[0]) & 1 == 1
                && vv >> graph.head(*arc.last().unwrap()) & 1 == 1
                && interior & (vu | vv) == 0
                && arc_embedded
                && once(u)
                && once(v)
                && arc.iter().all(|d| crossings[d.edge()] == 2)
                && c.lp.edge_mask() == u.edge_mask() | v.edge_mask() | arc_mask
        }
    }
}

/// Length of the shortest loop, which is always an embedded circle.
pub fn systole(graph: &Graph, metric: &Metric) -> Q {
    embedded_circles(graph)
        .iter()
        .map(|c| metric.loop_length(&c.as_loop()))
        .min()
        .expect("graphs of rank ≥ 1 have circles")
}

/// Candidates of one graph with their edge-crossing counts, for repeated
/// evaluation under many metrics.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
    pub crossings: Vec<Vec<u8>>,
}

impl CandidateSet {
    pub fn new(graph: &Graph) -> Self {
        let candidates = enumerate_candidates(graph);
        let crossings = candidates.iter().map(|c| c.lp.crossings(graph.num_edges())).collect();
        CandidateSet { candidates, crossings }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Shared, cached candidate set of `graph`.
    pub fn of(graph: &Graph) -> Arc<CandidateSet> {
        static CACHE: OnceLock<Mutex<HashMap<Graph, Arc<CandidateSet>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(set) = cache.lock().unwrap().get(graph) {
            return set.clone();
        }
        let set = Arc::new(CandidateSet::new(graph));
        cache.lock().unwrap().entry(graph.clone()).or_insert(set).clone()
    }

    pub fn weigh(&self, i: usize, values: &[Q]) -> Q {
        self.crossings[i]
            .iter()
            .zip(values)
            .filter(|(c, _)| **c > 0)
            .map(|(c, v)| v * Q::from_integer((*c as i64).into()))
            .sum()
    }
}
