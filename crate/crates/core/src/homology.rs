//! Mod-2 homology of graphs, double covers, and shortest loops in a class.
//!
//! Classes are bit masks over the non-tree edges of the graph's spanning
//! tree. Shortest representatives come from Dijkstra's algorithm on the
//! state space (vertex, partial class); realizers are then enumerated by a
//! depth-first search pruned with the same distance tables.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::candidates::{Candidate, Support};
use crate::error::{Error, Result};
use crate::graph::{DirEdge, Edge, EdgeId, Graph, VertexId};
use crate::loops::Loop;
use crate::map::GraphMap;
use crate::metric::Metric;
use crate::rational::{Scaled, Weight, Q};
use crate::z2::pair;

/// Element of `H₁(Γ; ℤ₂)` in the spanning-tree basis.
pub type HomologyClass = u64;

/// Nonzero functional on `H₁(Γ; ℤ₂)`, naming a connected double cover.
pub type CoverIndex = u64;

pub fn class_of_word(graph: &Graph, word: &[DirEdge]) -> HomologyClass {
    word.iter().fold(0, |acc, d| acc ^ graph.class_mask(d.edge()))
}

pub fn class_of_loop(graph: &Graph, lp: &Loop) -> HomologyClass {
    class_of_word(graph, lp.edges())
}

#[derive(Debug, Clone)]
pub struct DoubleCover {
    functional: CoverIndex,
    base: Arc<Graph>,
    total: Arc<Graph>,
    projection: GraphMap,
}

impl DoubleCover {
    /// Vertex `(v, s)` of the total space has index `v + s·|V|`; the lift of
    /// edge `e` starting on sheet `s` has index `e + s·|E|`.
    pub fn new(base: Arc<Graph>, functional: CoverIndex) -> Result<Self> {
        let n = base.rank();
        if functional == 0 || (n < 64 && functional >> n != 0) {
            return Err(Error::InvalidGraph(format!("{functional:#b} is not a nonzero functional in rank {n}")));
        }
        let nv = base.num_vertices();
        let vertices = (0..2)
            .flat_map(|s| base.vertex_names().iter().map(move |v| format!("{v}.{s}")))
            .collect();
        let edges = (0..2)
            .flat_map(|s| {
                let base = &base;
                base.edges().iter().enumerate().map(move |(e, edge)| {
                    let flip = pair(functional, base.class_mask(e)) as usize;
                    Edge { name: format!("{}.{s}", edge.name), tail: edge.tail + s * nv, head: edge.head + (s ^ flip) * nv }
                })
            })
            .collect();
        let total = Arc::new(Graph::new(vertices, edges)?);
        let ne = base.num_edges();
        let projection = GraphMap::new(
            total.clone(),
            base.clone(),
            (0..2 * nv).map(|v| v % nv).collect(),
            (0..2 * ne).map(|e| vec![DirEdge::forward(e % ne)]).collect(),
        )?;
        Ok(DoubleCover { functional, base, total, projection })
    }

    pub fn functional(&self) -> CoverIndex {
        self.functional
    }

    pub fn base(&self) -> &Arc<Graph> {
        &self.base
    }

    pub fn total(&self) -> &Arc<Graph> {
        &self.total
    }

    pub fn projection(&self) -> &GraphMap {
        &self.projection
    }

    /// Whether edge `e` of the base switches sheets.
    pub fn crosses(&self, e: EdgeId) -> bool {
        pair(self.functional, self.base.class_mask(e))
    }

    /// Lift of `d` starting on `sheet`, and the sheet it ends on.
    pub fn lift_edge(&self, d: DirEdge, sheet: usize) -> (DirEdge, usize) {
        let ne = self.base.num_edges();
        let other = sheet ^ self.crosses(d.edge()) as usize;
        let lifted = if d.is_reversed() {
            DirEdge::backward(d.edge() + other * ne)
        } else {
            DirEdge::forward(d.edge() + sheet * ne)
        };
        (lifted, other)
    }

    /// Lift of a closed word starting on sheet 0, if it closes up.
    pub fn lift_word(&self, word: &[DirEdge]) -> Option<Vec<DirEdge>> {
        let mut sheet = 0;
        let lifted = word
            .iter()
            .map(|&d| {
                let (l, s) = self.lift_edge(d, sheet);
                sheet = s;
                l
            })
            .collect();
        (sheet == 0).then_some(lifted)
    }

    pub fn lift_loop(&self, lp: &Loop) -> Option<Loop> {
        self.lift_word(lp.edges()).and_then(|w| Loop::from_closed_unchecked(&w))
    }

    /// Pullback of per-edge values (lengths or weights). Lengths are not
    /// renormalized, so a lifted metric has total length 2.
    pub fn lift_values(&self, values: &[Q]) -> Vec<Q> {
        values.iter().chain(values).cloned().collect()
    }

    pub fn lift_metric(&self, metric: &Metric) -> Vec<Q> {
        self.lift_values(metric.lengths())
    }

    /// Crossing counts of the projection of an upstairs loop.
    pub fn base_profile(&self, lp: &Loop) -> Vec<u8> {
        let ne = self.base.num_edges();
        let mut out = vec![0u8; ne];
        for d in lp.edges() {
            out[d.edge() % ne] += 1;
        }
        out
    }
}

/// All `2ⁿ − 1` connected double covers, ordered by functional.
pub fn enumerate_double_covers(base: &Arc<Graph>) -> Vec<DoubleCover> {
    (1..1u64 << base.rank())
        .map(|f| DoubleCover::new(base.clone(), f).expect("nonzero functionals give connected covers"))
        .collect()
}

/// Shortest length in a class together with every loop realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLengthReport {
    pub class: HomologyClass,
    pub length: Q,
    /// Tight loops of length exactly `length` in the class that cross each
    /// edge at most twice, in canonical order.
    pub realizers: Vec<Loop>,
}

pub(crate) fn add_ref<W: Weight>(a: &W, b: &W) -> W {
    a.clone() + b.clone()
}

/// Dijkstra on `(vertex, class)` states from `(source, 0)`, restricted to
/// vertices `≥ floor`. Returns distances indexed by `v << rank | class`.
pub(crate) fn state_distances<W, F>(
    graph: &Graph,
    weights: &[W],
    source: VertexId,
    floor: VertexId,
    add: F,
    zero: W,
) -> Vec<Option<W>>
where
    W: Ord + Clone,
    F: Fn(&W, &W) -> W,
{
    let r = graph.rank();
    let mut dist: Vec<Option<W>> = vec![None; graph.num_vertices() << r];
    let mut heap = BinaryHeap::new();
    dist[source << r] = Some(zero.clone());
    heap.push(Reverse((zero, source << r)));
    while let Some(Reverse((d, state))) = heap.pop() {
        if dist[state].as_ref().is_some_and(|best| *best < d) {
            continue;
        }
        let (u, c) = (state >> r, state & ((1 << r) - 1));
        for &step in graph.out_edges(u) {
            let v = graph.head(step);
            if v < floor {
                continue;
            }
            let next = v << r | (c ^ graph.class_mask(step.edge()) as usize);
            let nd = add(&d, &weights[step.edge()]);
            if dist[next].as_ref().is_none_or(|best| nd < *best) {
                dist[next] = Some(nd.clone());
                heap.push(Reverse((nd, next)));
            }
        }
    }
    dist
}

/// `ℓ(a)` for every class, indexed by class (entry 0 is unused).
fn minima<W: Weight>(graph: &Graph, weights: &[W]) -> Vec<Option<W>> {
    let r = graph.rank();
    let mut best: Vec<Option<W>> = vec![None; 1 << r];
    for s in 0..graph.num_vertices() {
        let dist = state_distances(graph, weights, s, s, add_ref, W::zero());
        for (a, slot) in best.iter_mut().enumerate().skip(1) {
            if let Some(d) = &dist[s << r | a] {
                if slot.as_ref().is_none_or(|b| d < b) {
                    *slot = Some(d.clone());
                }
            }
        }
    }
    best
}

fn check_lengths(graph: &Graph, lengths: &[Q]) -> Result<()> {
    if lengths.len() != graph.num_edges() {
        return Err(Error::InvalidMetric(format!("expected {} lengths, got {}", graph.num_edges(), lengths.len())));
    }
    if lengths.iter().any(|l| l.is_negative()) {
        return Err(Error::InvalidMetric("negative length".into()));
    }
    Ok(())
}

/// Largest number of edges on a walk the searches consider.
fn walk_bound(graph: &Graph) -> usize {
    (graph.num_vertices() << graph.rank()).max(2 * graph.num_edges())
}

/// `ℓ(a)` for every class `a` (index 0 holds zero).
pub fn class_lengths(graph: &Graph, lengths: &[Q]) -> Result<Vec<Q>> {
    check_lengths(graph, lengths)?;
    let scaled = Scaled::new(lengths);
    fn finish<W: Weight>(scaled: &Scaled, best: Vec<Option<W>>) -> Vec<Q> {
        best.iter()
            .map(|x| x.as_ref().map_or_else(|| scaled.ratio(&W::zero()), |x| scaled.ratio(x)))
            .collect()
    }
    Ok(match scaled.small(walk_bound(graph), 1) {
        Some(w) => finish(&scaled, minima(graph, &w)),
        None => finish(&scaled, minima(graph, &scaled.nums)),
    })
}

struct Search<'a, W> {
    graph: &'a Graph,
    weights: &'a [W],
    best: &'a [Option<W>],
    /// `slack[v << r | c]`: least `D(v, c ⊕ a) − ℓ(a)` over wanted classes `a`.
    slack: Vec<Option<W>>,
    wanted: &'a [bool],
    start: VertexId,
    first: DirEdge,
    crossings: Vec<u8>,
    word: Vec<DirEdge>,
    found: &'a mut Vec<BTreeSet<Loop>>,
}

impl<W: Weight> Search<'_, W> {
    fn run(&mut self, here: VertexId, class: usize, len: W) {
        let r = self.graph.rank();
        let prev = *self.word.last().unwrap();
        if here == self.start
            && self.wanted[class]
            && prev != self.first.inverse()
            && self.best[class].as_ref() == Some(&len)
        {
            if let Some(lp) = Loop::from_closed_unchecked(&self.word) {
                self.found[class].insert(lp);
            }
        }
        for &d in self.graph.out_edges(here) {
            let e = d.edge();
            if e < self.first.edge() || d == prev.inverse() || self.crossings[e] >= 2 {
                continue;
            }
            let v = self.graph.head(d);
            let c = class ^ self.graph.class_mask(e) as usize;
            let nlen = len.clone() + self.weights[e].clone();
            match &self.slack[v << r | c] {
                Some(s) if nlen.clone() + s.clone() <= W::zero() => {}
                _ => continue,
            }
            self.crossings[e] += 1;
            self.word.push(d);
            self.run(v, c, nlen);
            self.word.pop();
            self.crossings[e] -= 1;
        }
    }
}

fn realizers_in<W: Weight>(graph: &Graph, weights: &[W], wanted: &[bool]) -> (Vec<Option<W>>, Vec<BTreeSet<Loop>>) {
    let r = graph.rank();
    let nc = 1usize << r;
    let best = minima(graph, weights);
    let mut found = vec![BTreeSet::new(); nc];
    let tables: Vec<Vec<Option<W>>> = (0..graph.num_vertices())
        .map(|s| state_distances(graph, weights, s, 0, add_ref, W::zero()))
        .collect();
    for e0 in 0..graph.num_edges() {
        let first = DirEdge::forward(e0);
        let start = graph.tail(first);
        let dist = &tables[start];
        // Remaining distance from (v, c) back to (start, a) equals D(v, c ⊕ a)
        // by symmetry of the state graph under class translation.
        let mut slack = vec![None; graph.num_vertices() << r];
        for v in 0..graph.num_vertices() {
            for c in 0..nc {
                let mut m: Option<W> = None;
                for a in (1..nc).filter(|&a| wanted[a]) {
                    if let (Some(d), Some(b)) = (&dist[v << r | (c ^ a)], &best[a]) {
                        let s = d.clone() - b.clone();
                        if m.as_ref().is_none_or(|x| s < *x) {
                            m = Some(s);
                        }
                    }
                }
                slack[v << r | c] = m;
            }
        }
        let c0 = graph.class_mask(e0) as usize;
        let len0 = weights[e0].clone();
        let v0 = graph.head(first);
        if !matches!(&slack[v0 << r | c0], Some(s) if len0.clone() + s.clone() <= W::zero()) {
            continue;
        }
        let mut crossings = vec![0u8; graph.num_edges()];
        crossings[e0] = 1;
        Search {
            graph,
            weights,
            best: &best,
            slack,
            wanted,
            start,
            first,
            crossings,
            word: vec![first],
            found: &mut found,
        }
        .run(v0, c0, len0);
    }
    (best, found)
}

/// Reports for the classes `a` with `wanted[a]`; other entries are `None`.
pub fn class_reports(graph: &Graph, lengths: &[Q], wanted: &[bool]) -> Result<Vec<Option<ClassLengthReport>>> {
    check_lengths(graph, lengths)?;
    let nc = 1usize << graph.rank();
    if wanted.len() != nc {
        return Err(Error::InvalidGraph(format!("class selection must have {nc} entries")));
    }
    let mut wanted = wanted.to_vec();
    wanted[0] = false;
    let scaled = Scaled::new(lengths);
    fn assemble<W: Weight>(
        scaled: &Scaled,
        best: Vec<Option<W>>,
        found: Vec<BTreeSet<Loop>>,
        wanted: &[bool],
    ) -> Vec<Option<ClassLengthReport>> {
        best.into_iter()
            .zip(found)
            .enumerate()
            .map(|(a, (b, f))| {
                wanted[a].then(|| ClassLengthReport {
                    class: a as HomologyClass,
                    length: scaled.ratio(&b.expect("connected graphs realize every class")),
                    realizers: f.into_iter().collect(),
                })
            })
            .collect()
    }
    Ok(match scaled.small(walk_bound(graph), 4) {
        Some(w) => {
            let (b, f) = realizers_in(graph, &w, &wanted);
            assemble(&scaled, b, f, &wanted)
        }
        None => {
            let (b, f) = realizers_in::<BigInt>(graph, &scaled.nums, &wanted);
            assemble(&scaled, b, f, &wanted)
        }
    })
}

/// Reports for every nonzero class, in class order.
pub fn all_class_reports(graph: &Graph, lengths: &[Q]) -> Result<Vec<ClassLengthReport>> {
    let wanted = vec![true; 1 << graph.rank()];
    Ok(class_reports(graph, lengths, &wanted)?.into_iter().flatten().collect())
}

/// Shortest length in class `a ≠ 0` with all its realizers.
pub fn shortest_in_class(graph: &Graph, lengths: &[Q], class: HomologyClass) -> Result<ClassLengthReport> {
    if class == 0 {
        return Err(Error::TrivialClass);
    }
    let nc = 1u64 << graph.rank();
    if class >= nc {
        return Err(Error::InvalidGraph(format!("class {class:#b} exceeds rank {}", graph.rank())));
    }
    let mut wanted = vec![false; nc as usize];
    wanted[class as usize] = true;
    Ok(class_reports(graph, lengths, &wanted)?.swap_remove(class as usize).expect("selected class"))
}

/// A cover in which `candidate` lifts to a closed loop, and that lift.
/// Embedded circles use the first functional vanishing on them; figure eights
/// and barbells use the first functional that is odd on both circles.
pub fn lift_candidate(graph: &Arc<Graph>, candidate: &Candidate) -> Result<(DoubleCover, Loop)> {
    let ok: Box<dyn Fn(u64) -> bool> = match &candidate.support {
        Support::Circle => {
            let c = class_of_loop(graph, &candidate.lp);
            Box::new(move |f| !pair(f, c))
        }
        Support::FigureEight { u, v } | Support::Barbell { u, v, .. } => {
            let (cu, cv) = (class_of_loop(graph, u), class_of_loop(graph, v));
            Box::new(move |f| pair(f, cu) && pair(f, cv))
        }
    };
    let f = (1..1u64 << graph.rank())
        .find(|&f| ok(f))
        .ok_or_else(|| Error::InvalidGraph("no double cover lifts this candidate".into()))?;
    let cover = DoubleCover::new(graph.clone(), f)?;
    let lift = cover.lift_loop(&candidate.lp).expect("functional chosen so the candidate lifts");
    Ok((cover, lift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::enumerate_candidates;
    use crate::graph::tests::barbell;
    use crate::rational::q;

    fn rose() -> Arc<Graph> {
        Arc::new(Graph::rose(2))
    }

    #[test]
    fn classes_of_loops() {
        let r = rose();
        let a = Loop::parse(&r, "a").unwrap().unwrap();
        assert_eq!(class_of_loop(&r, &a), 0b01);
        let comm = Loop::parse(&r, "a b a' b'").unwrap().unwrap();
        assert_eq!(class_of_loop(&r, &comm), 0);
    }

    #[test]
    fn covers_of_rank_two() {
        let r = rose();
        let covers = enumerate_double_covers(&r);
        assert_eq!(covers.len(), 3);
        for c in &covers {
            assert_eq!(c.total().rank(), 3);
            assert_eq!(c.total().num_vertices(), 2);
            for w in ["a", "b", "a b", "a a b"] {
                let lp = Loop::parse(&r, w).unwrap().unwrap();
                let lifts = c.lift_loop(&lp).is_some();
                assert_eq!(lifts, !pair(c.functional(), class_of_loop(&r, &lp)));
                if let Some(up) = c.lift_loop(&lp) {
                    assert_eq!(c.projection().apply_loop(&up).unwrap(), lp);
                }
            }
        }
    }

    #[test]
    fn rose_class_lengths() {
        let r = rose();
        let l = vec![q(1, 3), q(2, 3)];
        let rep = shortest_in_class(&r, &l, 0b11).unwrap();
        assert_eq!(rep.length, q(1, 1));
        let words: Vec<String> = rep.realizers.iter().map(|x| x.display(&r).to_string()).collect();
        assert_eq!(words, vec!["a b", "a b'"]);
        assert_eq!(class_lengths(&r, &l).unwrap(), vec![q(0, 1), q(1, 3), q(2, 3), q(1, 1)]);
        assert_eq!(shortest_in_class(&r, &l, 0), Err(Error::TrivialClass));
    }

    #[test]
    fn shorter_connector_wins() {
        // circles a at p and b at q joined by parallel arcs c and d
        let g = Graph::from_names(
            &["p", "q"],
            &[("a", "p", "p"), ("b", "q", "q"), ("c", "p", "q"), ("d", "p", "q")],
        )
        .unwrap();
        let l = vec![q(1, 4), q(1, 4), q(1, 8), q(3, 8)];
        let acbc = Loop::parse(&g, "a c b c'").unwrap().unwrap();
        let adbd = Loop::parse(&g, "a d b d'").unwrap().unwrap();
        let cls = class_of_loop(&g, &acbc);
        assert_eq!(cls, class_of_loop(&g, &adbd));
        let rep = shortest_in_class(&g, &l, cls).unwrap();
        assert_eq!(rep.length, q(3, 4));
        assert!(rep.realizers.contains(&acbc));
        assert!(!rep.realizers.contains(&adbd));
    }

    #[test]
    fn candidates_lift_to_unique_realizers() {
        for g in [rose(), Arc::new(barbell())] {
            let l = Metric::uniform(&g);
            for c in enumerate_candidates(&g) {
                let (cover, lift) = lift_candidate(&g, &c).unwrap();
                assert!(lift.is_embedded(cover.total()));
                let cls = class_of_loop(cover.total(), &lift);
                assert_ne!(cls, 0);
                let rep = shortest_in_class(cover.total(), &cover.lift_metric(&l), cls).unwrap();
                assert_eq!(rep.realizers, vec![lift]);
            }
        }
    }
}
