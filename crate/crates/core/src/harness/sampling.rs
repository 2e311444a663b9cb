//! Seeded random graphs, metrics, directions, automorphisms and point pairs.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::candidates::systole;
use crate::collapse::{fresh_name, ForestCollapse};
use crate::error::{Error, Result};
use crate::graph::{DirEdge, EdgeId, Graph};
use crate::map::GraphMap;
use crate::marked::MarkedPoint;
use crate::metric::{is_forest, Metric, TangentVector};
use crate::paths::{PLPath, PathStep};
use crate::rational::{q, qi, Q};

/// Grid resolution for random weights and directions.
pub const GRID: i64 = 1 << 16;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for item `index` of a suite seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Interior metric with integer weights in `[1, GRID]`, normalized.
pub fn random_metric<R: Rng>(graph: &Graph, rng: &mut R) -> Metric {
    let w: Vec<Q> = (0..graph.num_edges()).map(|_| qi(rng.random_range(1..=GRID))).collect();
    Metric::from_weights(graph, &w).expect("positive weights")
}

/// Metric vanishing on a random forest of at most `max_zero` edges.
pub fn random_face_metric<R: Rng>(graph: &Graph, rng: &mut R, max_zero: usize) -> Metric {
    let mut edges: Vec<EdgeId> = (0..graph.num_edges()).collect();
    edges.shuffle(rng);
    let target = rng.random_range(0..=max_zero);
    let mut zero = Vec::new();
    for e in edges {
        if zero.len() == target {
            break;
        }
        zero.push(e);
        if !is_forest(graph, &zero) {
            zero.pop();
        }
    }
    let w: Vec<Q> = (0..graph.num_edges())
        .map(|e| if zero.contains(&e) { Q::zero() } else { qi(rng.random_range(1..=GRID)) })
        .collect();
    Metric::from_weights(graph, &w).expect("zero set is a forest")
}

/// Random direction on the grid `k / GRID`, recentred to sum zero and
/// integrable at `metric`: weights on zero-length edges are nonnegative and
/// the recentring is spread over the positive-length edges.
pub fn random_tangent<R: Rng>(graph: &Graph, rng: &mut R, metric: &Metric) -> TangentVector {
    let ne = graph.num_edges();
    let zero: Vec<bool> = (0..ne).map(|e| metric.length(e).is_zero()).collect();
    let mut w: Vec<Q> = (0..ne)
        .map(|e| {
            let k = if zero[e] { rng.random_range(0..=GRID) } else { rng.random_range(-GRID..=GRID) };
            q(k, GRID)
        })
        .collect();
    let total: Q = w.iter().sum();
    let free = zero.iter().filter(|z| !**z).count() as i64;
    let shift = total / qi(free);
    for e in 0..ne {
        if !zero[e] {
            w[e] -= &shift;
        }
    }
    TangentVector::new(graph, w).expect("recentred to sum zero")
}

/// Random partition for a blow-up at a vertex of valence ≥ 4.
fn random_split<R: Rng>(graph: &Graph, rng: &mut R) -> Option<(usize, Vec<DirEdge>)> {
    let big: Vec<usize> = (0..graph.num_vertices()).filter(|&v| graph.valence(v) >= 4).collect();
    let &v = big.choose(rng)?;
    let mut out = graph.out_edges(v).to_vec();
    out.shuffle(rng);
    let k = rng.random_range(2..=out.len() - 2);
    out.truncate(k);
    Some((v, out))
}

/// Blows up a random vertex of valence ≥ 4; the new edge has length zero.
pub fn random_blow_up<R: Rng>(x: &MarkedPoint, rng: &mut R) -> Option<(MarkedPoint, ForestCollapse)> {
    let (v, moved) = random_split(x.graph(), rng)?;
    let vname = fresh_name(x.graph(), "v");
    let ename = fresh_name(x.graph(), "e");
    x.blow_up(v, &moved, &vname, &ename).ok()
}

/// Gives edge `e` length `s` and rescales the rest by `1 − s`.
pub fn grow_edge(x: &MarkedPoint, e: EdgeId, s: &Q) -> Result<MarkedPoint> {
    let keep = Q::one() - s - x.metric().length(e);
    let rest = Q::one() - x.metric().length(e);
    let lengths = (0..x.graph().num_edges())
        .map(|f| if f == e { s.clone() } else { x.metric().length(f) * &keep / &rest })
        .collect();
    x.with_metric(Metric::new(x.graph(), lengths)?)
}

/// Shrinks non-loop edge `e` to zero and collapses it.
pub fn shrink_and_collapse(x: &MarkedPoint, e: EdgeId) -> Result<MarkedPoint> {
    let g = x.graph();
    if g.is_loop_edge(e) {
        return Err(Error::NotAForest(g.edge_name(e).to_string()));
    }
    let rest = Q::one() - x.metric().length(e);
    let lengths: Vec<Q> = (0..g.num_edges())
        .map(|f| if f == e { Q::zero() } else { x.metric().length(f) / &rest })
        .collect();
    x.with_metric(Metric::new(g, lengths)?)?.collapse(&[e])
}

/// Elementary automorphisms of the rose with their inverses: transvections
/// on either side, inversions and transpositions of petals.
pub fn random_elementary<R: Rng>(rose: &Arc<Graph>, rng: &mut R) -> (GraphMap, GraphMap) {
    let n = rose.rank();
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let (xi, xj) = (DirEdge::forward(i), DirEdge::forward(j));
    let id = |k: usize| vec![DirEdge::forward(k)];
    let mut fwd: Vec<Vec<DirEdge>> = (0..n).map(id).collect();
    let mut inv = fwd.clone();
    match rng.random_range(0..4) {
        0 => {
            fwd[i] = vec![xi, xj];
            inv[i] = vec![xi, xj.inverse()];
        }
        1 => {
            fwd[i] = vec![xj, xi];
            inv[i] = vec![xj.inverse(), xi];
        }
        2 => {
            fwd[i] = vec![xi.inverse()];
            inv[i] = vec![xi.inverse()];
        }
        _ => {
            fwd.swap(i, j);
            inv.swap(i, j);
        }
    }
    let mk = |imgs| GraphMap::new(rose.clone(), rose.clone(), vec![0], imgs).expect("valid rose map");
    (mk(fwd), mk(inv))
}

/// Product of `len` random elementary automorphisms, with its inverse.
pub fn random_automorphism<R: Rng>(rose: &Arc<Graph>, rng: &mut R, len: usize) -> (GraphMap, GraphMap) {
    let mut phi = GraphMap::identity(rose.clone());
    let mut inv = phi.clone();
    for _ in 0..len {
        let (g, gi) = random_elementary(rose, rng);
        phi = GraphMap::compose(&phi, &g).expect("rose maps compose");
        inv = GraphMap::compose(&gi, &inv).expect("rose maps compose");
    }
    (phi, inv)
}

/// Random marked graph of the given rank: random blow-ups of the rose, a
/// short random change of marking and a random interior metric.
pub fn random_point<R: Rng>(rank: usize, rng: &mut R) -> MarkedPoint {
    let rose = Graph::rose(rank);
    let mut x = MarkedPoint::rose(Metric::uniform(&rose)).expect("rose point");
    let blowups = rng.random_range(0..=2 * rank - 3);
    for _ in 0..blowups {
        match random_blow_up(&x, rng) {
            Some((y, _)) => x = y,
            None => break,
        }
    }
    let word = rng.random_range(0..=3);
    let (phi, inv) = random_automorphism(x.marking_in().source(), rng, word);
    x = x.act_by_automorphism(&phi, &inv).expect("automorphisms act");
    let m = random_metric(x.graph(), rng);
    x.with_metric(m).expect("metric fits")
}

/// Random valid graph of the given rank (metric discarded).
pub fn random_graph<R: Rng>(rank: usize, rng: &mut R) -> Arc<Graph> {
    random_point(rank, rng).graph().clone()
}

/// Random point with systole at least `eps`, by rejection.
pub fn random_thick_point<R: Rng>(rank: usize, eps: &Q, rng: &mut R, attempts: usize) -> Result<MarkedPoint> {
    for _ in 0..attempts {
        let x = random_point(rank, rng);
        if systole(x.graph(), x.metric()) >= *eps {
            return Ok(x);
        }
    }
    Err(Error::SamplingExhausted { attempts, reason: format!("no point with systole ≥ {eps}") })
}

/// Two points with differences of markings in both directions.
#[derive(Debug, Clone)]
pub struct PointPairWitness {
    pub x: MarkedPoint,
    pub y: MarkedPoint,
    pub forward: GraphMap,
    pub backward: GraphMap,
}

impl PointPairWitness {
    pub fn new(x: MarkedPoint, y: MarkedPoint) -> Result<Self> {
        let forward = x.difference_to(&y)?;
        let backward = y.difference_to(&x)?;
        let round = GraphMap::compose(&backward, &forward)?;
        if round.h1_matrix() != crate::z2::Z2Matrix::identity(x.rank()) {
            return Err(Error::InvalidMarking("witness maps are not mutually inverse on homology".into()));
        }
        Ok(PointPairWitness { x, y, forward, backward })
    }
}

/// Applies one random elementary move to `y`: a step inside the simplex, a
/// collapse, a blow-up or a change of marking.
pub fn random_move<R: Rng>(y: &MarkedPoint, rng: &mut R) -> Result<MarkedPoint> {
    match rng.random_range(0..4) {
        0 => {
            let tau = random_tangent(y.graph(), rng, y.metric());
            match y.metric().max_step(&tau) {
                Some(limit) if limit.is_positive() => {
                    let frac = q(rng.random_range(1..=GRID / 2), GRID);
                    let m = y.metric().moved(y.graph(), &tau, &(limit * frac))?;
                    y.with_metric(m)
                }
                _ => Ok(y.clone()),
            }
        }
        1 => {
            let g = y.graph();
            let options: Vec<EdgeId> = (0..g.num_edges()).filter(|&e| !g.is_loop_edge(e)).collect();
            match options.choose(rng) {
                Some(&e) => shrink_and_collapse(y, e),
                None => Ok(y.clone()),
            }
        }
        2 => match random_blow_up(y, rng) {
            Some((z, _)) => {
                let e = z.graph().num_edges() - 1;
                grow_edge(&z, e, &q(rng.random_range(GRID / 64..=GRID / 4), GRID))
            }
            None => Ok(y.clone()),
        },
        _ => {
            let (phi, inv) = random_elementary(y.marking_in().source(), rng);
            y.act_by_automorphism(&phi, &inv)
        }
    }
}

/// A random point and the result of `moves` random moves applied to it.
pub fn sample_pair(rank: usize, moves: usize, seed: u64) -> Result<PointPairWitness> {
    if !(2..=4).contains(&rank) {
        return Err(Error::InvalidGraph(format!("rank {rank} is outside 2..=4")));
    }
    let mut rng = rng(seed);
    let x = random_point(rank, &mut rng);
    let mut y = x.clone();
    for _ in 0..moves {
        y = random_move(&y, &mut rng)?;
    }
    PointPairWitness::new(x, y)
}

/// Random piecewise-linear path of `steps` steps from `start`. Linear steps
/// sometimes run all the way to a face; with `transitions`, faces are
/// collapsed and vertices blown up along the way.
pub fn random_path<R: Rng>(start: MarkedPoint, rng: &mut R, steps: usize, transitions: bool) -> Result<PLPath> {
    let mut cur = start.clone();
    let mut out = Vec::with_capacity(steps);
    while out.len() < steps {
        let choice = if transitions { rng.random_range(0..5) } else { 0 };
        let step = match choice {
            3 if !cur.metric().zero_edges().is_empty() => PathStep::Collapse { forest: cur.metric().zero_edges() },
            4 => match random_blow_up(&cur, rng) {
                Some((_, collapse)) => PathStep::Expand { collapse },
                None => continue,
            },
            _ => {
                let direction = random_tangent(cur.graph(), rng, cur.metric());
                let Some(limit) = cur.metric().max_step(&direction) else { continue };
                let duration = if rng.random_bool(0.3) { limit } else { limit * q(rng.random_range(1..GRID), GRID) };
                PathStep::Linear { direction, duration }
            }
        };
        // Running to a face can close up a circle of zero-length edges.
        let Ok(next) = PLPath::new(cur.clone(), vec![step.clone()]) else { continue };
        cur = next.end().clone();
        out.push(step);
    }
    PLPath::new(start, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipschitz::stretch_factor;

    #[test]
    fn random_points_are_valid_and_reproducible() {
        for rank in 2..=4 {
            for seed in 0..10 {
                let a = random_point(rank, &mut rng(seed));
                let b = random_point(rank, &mut rng(seed));
                assert_eq!(a, b);
                assert_eq!(a.rank(), rank);
                let tau = random_tangent(a.graph(), &mut rng(seed), a.metric());
                assert!(tau.is_integrable(a.metric()));
            }
        }
    }

    #[test]
    fn random_paths_are_valid() {
        for seed in 0..20 {
            let mut r = rng(seed);
            let x = random_point(2 + (seed as usize % 2), &mut r);
            let p = random_path(x, &mut r, 6, true).unwrap();
            assert_eq!(p.steps().len(), 6);
        }
    }

    #[test]
    fn pairs_without_moves_coincide() {
        let p = sample_pair(2, 0, 7).unwrap();
        assert_eq!(p.x, p.y);
        assert_eq!(stretch_factor(&p.x, &p.y).unwrap(), Q::one());
    }

    #[test]
    fn pairs_with_moves_have_witnesses() {
        for seed in 0..20 {
            let p = sample_pair(3, 6, seed).unwrap();
            assert!(p.forward.is_h1_isomorphism());
            let s = stretch_factor(&p.x, &p.y).unwrap();
            assert!(s >= Q::one());
        }
    }
}
