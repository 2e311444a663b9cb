//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use outerlip::homology::{class_of_loop, HomologyClass};
use outerlip::{DirEdge, Graph, Loop, Q};

/// Every tight loop crossing each edge at most `max_cross` times, by
/// exhaustive non-backtracking walks from every directed edge.
pub fn bounded_loops(graph: &Graph, max_cross: u8) -> Vec<Loop> {
    let mut found = BTreeSet::new();
    let mut counts = vec![0u8; graph.num_edges()];
    let mut word = Vec::new();
    for e in 0..graph.num_edges() {
        for first in [DirEdge::forward(e), DirEdge::backward(e)] {
            counts[e] += 1;
            word.push(first);
            extend(graph, max_cross, &mut counts, &mut word, &mut found);
            word.pop();
            counts[e] -= 1;
        }
    }
    found.into_iter().collect()
}

fn extend(graph: &Graph, max_cross: u8, counts: &mut [u8], word: &mut Vec<DirEdge>, found: &mut BTreeSet<Loop>) {
    let first = word[0];
    let last = *word.last().unwrap();
    if graph.head(last) == graph.tail(first) && last != first.inverse() {
        if let Some(lp) = Loop::from_closed(graph, word).unwrap() {
            found.insert(lp);
        }
    }
    for &d in graph.out_edges(graph.head(last)) {
        if d == last.inverse() || counts[d.edge()] >= max_cross {
            continue;
        }
        counts[d.edge()] += 1;
        word.push(d);
        extend(graph, max_cross, counts, word, found);
        word.pop();
        counts[d.edge()] -= 1;
    }
}

fn components(graph: &Graph, edges: &[usize]) -> usize {
    let mut parent: Vec<usize> = (0..graph.num_vertices()).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        if p[v] != v {
            p[v] = find(p, p[v]);
        }
        p[v]
    }
    let mut touched = BTreeSet::new();
    for &e in edges {
        let ed = &graph.edges()[e];
        touched.insert(ed.tail);
        touched.insert(ed.head);
        let (a, b) = (find(&mut parent, ed.tail), find(&mut parent, ed.head));
        parent[a] = b;
    }
    touched.iter().map(|&v| find(&mut parent, v)).collect::<BTreeSet<_>>().len()
}

fn degrees(graph: &Graph, edges: &[usize]) -> Vec<usize> {
    let mut deg = vec![0; graph.num_vertices()];
    for &e in edges {
        let ed = &graph.edges()[e];
        deg[ed.tail] += 1;
        deg[ed.head] += 1;
    }
    deg
}

/// Candidate test by the shape of the subgraph a loop traverses: an embedded
/// circle, two circles sharing one vertex, or two disjoint circles joined by
/// an embedded arc that the loop crosses twice.
pub fn is_candidate_shape(graph: &Graph, lp: &Loop) -> bool {
    let cross = lp.crossings(graph.num_edges());
    if cross.iter().any(|&c| c > 2) {
        return false;
    }
    let once: Vec<usize> = (0..cross.len()).filter(|&e| cross[e] == 1).collect();
    let twice: Vec<usize> = (0..cross.len()).filter(|&e| cross[e] == 2).collect();
    let dc = degrees(graph, &once);
    if twice.is_empty() {
        let fours = dc.iter().filter(|&&d| d == 4).count();
        return dc.iter().all(|&d| d == 0 || d == 2 || d == 4) && fours <= 1;
    }
    let dp = degrees(graph, &twice);
    if dc.iter().any(|&d| d != 0 && d != 2) || components(graph, &once) != 2 {
        return false;
    }
    let ends: Vec<usize> = (0..dp.len()).filter(|&v| dp[v] == 1).collect();
    let arc_vertices = dp.iter().filter(|&&d| d > 0).count();
    if dp.iter().any(|&d| d > 2) || ends.len() != 2 || components(graph, &twice) != 1 || twice.len() + 1 != arc_vertices {
        return false;
    }
    let interior_clear = (0..dp.len()).all(|v| dp[v] != 2 || dc[v] == 0);
    let ends_on_circles = ends.iter().all(|&v| dc[v] == 2);
    let mut with_one_end = once.clone();
    with_one_end.extend(&twice);
    interior_clear && ends_on_circles && components(graph, &with_one_end) == 1
}

/// Minimum length in each nonzero class with the loops attaining it, over the
/// loops of `bounded_loops(graph, 2)`.
pub fn class_minima(graph: &Graph, lengths: &[Q], loops: &[Loop]) -> Vec<Option<(Q, Vec<Loop>)>> {
    let mut best: Vec<Option<(Q, Vec<Loop>)>> = vec![None; 1 << graph.rank()];
    for lp in loops {
        let c: HomologyClass = class_of_loop(graph, lp);
        if c == 0 {
            continue;
        }
        let len = lp.weigh(lengths);
        match &mut best[c as usize] {
            Some((b, set)) if *b == len => set.push(lp.clone()),
            Some((b, _)) if *b < len => {}
            slot => *slot = Some((len, vec![lp.clone()])),
        }
    }
    for (_, set) in best.iter_mut().flatten() {
        set.sort();
    }
    best
}
