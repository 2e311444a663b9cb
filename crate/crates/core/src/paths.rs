//! Piecewise-linear paths and their lengths `len_L` and `len_N`.
//!
//! Along a linear segment `ℓ + tτ` the maximizing candidate of `‖·‖ᴸ` does not
//! change, so `len_L` of a segment is the log of one candidate's stretch. For
//! `len_N` each summand `ℓᵢ(a)` is a concave piecewise-linear function of `t`;
//! its pieces are found exactly from shortest-walk lines and each piece
//! contributes a log-ratio of its line's end values.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::candidates::CandidateSet;
use crate::collapse::ForestCollapse;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::lipschitz::norm_in;
use crate::loops::Loop;
use crate::marked::MarkedPoint;
use crate::metric::{Metric, TangentVector};
use crate::potential::{k_constant, psi_of_metric, psi_terms, term_lines, Side};
use crate::rational::{ln_q, Q};

#[derive(Debug, Clone)]
pub enum PathStep {
    /// Moves `ℓ` to `ℓ + duration·direction` inside the current simplex.
    Linear { direction: TangentVector, duration: Q },
    /// Passes to the quotient by a forest of zero-length edges.
    Collapse { forest: Vec<EdgeId> },
    /// Passes from `Γ/F` to the face of `Γ` where `F` has length zero.
    Expand { collapse: ForestCollapse },
}

/// A path given by its start point and steps. The end point is stored so
/// that reversal is an involution on the representation.
#[derive(Debug, Clone)]
pub struct PLPath {
    start: MarkedPoint,
    end: MarkedPoint,
    steps: Vec<PathStep>,
}

fn apply_step(x: &MarkedPoint, step: &PathStep) -> Result<MarkedPoint> {
    match step {
        PathStep::Linear { direction, duration } => {
            if direction.weights().len() != x.graph().num_edges() {
                return Err(Error::GraphMismatch("direction does not fit the current graph".into()));
            }
            if duration.is_negative() {
                return Err(Error::InvalidTangent("negative duration".into()));
            }
            direction.check_integrable(x.graph(), x.metric())?;
            x.with_metric(x.metric().moved(x.graph(), direction, duration)?)
        }
        PathStep::Collapse { forest } => x.collapse(forest),
        PathStep::Expand { collapse } => x.expand_by(collapse),
    }
}

impl PLPath {
    pub fn new(start: MarkedPoint, steps: Vec<PathStep>) -> Result<Self> {
        let mut steps = steps;
        for s in &mut steps {
            if let PathStep::Collapse { forest } = s {
                forest.sort_unstable();
                forest.dedup();
            }
        }
        let mut end = start.clone();
        for s in &steps {
            end = apply_step(&end, s)?;
        }
        Ok(PLPath { start, end, steps })
    }

    pub fn constant(x: MarkedPoint) -> Self {
        PLPath { start: x.clone(), end: x, steps: Vec::new() }
    }

    /// Straight segment from `x` to `x` with metric `to`.
    pub fn segment(x: &MarkedPoint, to: &Metric) -> Result<Self> {
        let direction = TangentVector::between(x.metric(), to);
        PLPath::new(x.clone(), vec![PathStep::Linear { direction, duration: Q::from_integer(1.into()) }])
    }

    pub fn start(&self) -> &MarkedPoint {
        &self.start
    }

    pub fn end(&self) -> &MarkedPoint {
        &self.end
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    /// Graph and metric before each step, then at the end.
    pub fn states(&self) -> Vec<(Arc<Graph>, Metric)> {
        let mut out = vec![(self.start.graph().clone(), self.start.metric().clone())];
        let mut cur = self.start.clone();
        for s in &self.steps {
            cur = apply_step(&cur, s).expect("validated on construction");
            out.push((cur.graph().clone(), cur.metric().clone()));
        }
        out
    }

    /// `t ↦ γ(1 − t)`.
    pub fn reverse(&self) -> PLPath {
        let states = self.states();
        let steps = self
            .steps
            .iter()
            .enumerate()
            .rev()
            .map(|(i, s)| match s {
                PathStep::Linear { direction, duration } => {
                    PathStep::Linear { direction: -direction, duration: duration.clone() }
                }
                PathStep::Collapse { forest } => PathStep::Expand {
                    collapse: ForestCollapse::new(states[i].0.clone(), forest).expect("validated on construction"),
                },
                PathStep::Expand { collapse } => PathStep::Collapse { forest: collapse.forest().to_vec() },
            })
            .collect();
        PLPath { start: self.end.clone(), end: self.start.clone(), steps }
    }

    /// Appends `other`, which must start where `self` ends (same graph and metric).
    pub fn concat(&self, other: &PLPath) -> Result<PLPath> {
        if self.end.graph() != other.start.graph() || self.end.metric() != other.start.metric() {
            return Err(Error::GraphMismatch("paths do not meet".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        PLPath::new(self.start.clone(), steps)
    }

    /// Splits every linear step into `parts` equal steps.
    pub fn refined(&self, parts: u32) -> PLPath {
        let n = Q::from_integer(parts.into());
        let steps = self
            .steps
            .iter()
            .flat_map(|s| match s {
                PathStep::Linear { direction, duration } => (0..parts)
                    .map(|_| PathStep::Linear { direction: direction.clone(), duration: duration / &n })
                    .collect(),
                other => vec![other.clone()],
            })
            .collect();
        PLPath { start: self.start.clone(), end: self.end.clone(), steps }
    }

    /// Same path with every linear step traversed at speed `c`.
    pub fn reparametrized(&self, c: &Q) -> PLPath {
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                PathStep::Linear { direction, duration } => {
                    PathStep::Linear { direction: direction.scaled(c), duration: duration / c }
                }
                other => other.clone(),
            })
            .collect();
        PLPath { start: self.start.clone(), end: self.end.clone(), steps }
    }
}

/// Contribution of one linear step to `len_L`.
#[derive(Debug, Clone)]
pub struct SegmentStretch {
    pub step: usize,
    pub witness: Loop,
    /// `(ℓ + sτ)(α) / ℓ(α)` for the witness `α`.
    pub factor: Q,
}

/// A maximal interval of a linear step on which one summand is linear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub term: usize,
    pub from: Q,
    pub to: Q,
    /// Value of the summand at `to` over its value at `from`.
    pub ratio: Q,
}

#[derive(Debug, Clone)]
pub struct PathLengths {
    pub len_l: f64,
    pub len_n: f64,
    pub segments: Vec<SegmentStretch>,
    /// Per linear step, the pieces of every summand.
    pub pieces: Vec<Vec<Piece>>,
    pub psi_start: f64,
    pub psi_end: f64,
    /// Every per-summand telescoping product and every transition multiset
    /// matched exactly.
    pub exact: bool,
    /// `len_N − len_L − (Ψ(end) − Ψ(start))` in floating point.
    pub residual: f64,
}

pub fn len_l(path: &PLPath) -> (f64, Vec<SegmentStretch>) {
    let mut segments = Vec::new();
    for (i, (step, (graph, metric))) in path.steps.iter().zip(path.states()).enumerate() {
        if let PathStep::Linear { direction, duration } = step {
            if duration.is_zero() || direction.is_zero() {
                continue;
            }
            let set = CandidateSet::of(&graph);
            let (w, norm) = norm_in(&set, &metric, direction);
            let factor = Q::from_integer(1.into()) + duration * norm;
            segments.push(SegmentStretch { step: i, witness: set.candidates[w].lp.clone(), factor });
        }
    }
    let total = segments.iter().map(|s| ln_q(&s.factor)).sum();
    (total, segments)
}

type Line = (Q, Q);

struct Envelope<'a> {
    graph: &'a Graph,
    base: &'a [Q],
    tau: &'a TangentVector,
    cache: HashMap<(Q, Side), Arc<Vec<Line>>>,
}

impl Envelope<'_> {
    /// Lines `(b, m)` with `b + m·t` touching every summand at `t`.
    fn lines(&mut self, t: &Q, side: Side) -> Arc<Vec<(Q, Q)>> {
        if let Some(v) = self.cache.get(&(t.clone(), side)) {
            return v.clone();
        }
        let lengths: Vec<Q> = self.base.iter().zip(self.tau.weights()).map(|(l, w)| l + t * w).collect();
        let lines: Vec<(Q, Q)> = term_lines(self.graph, &lengths, self.tau.weights(), side)
            .into_iter()
            .map(|(v, m)| (&v - &m * t, m))
            .collect();
        let lines = Arc::new(lines);
        self.cache.insert((t.clone(), side), lines.clone());
        lines
    }

    fn value(line: &Line, t: &Q) -> Q {
        &line.0 + &line.1 * t
    }

    /// Pieces of summand `k` on `[t0, t1]`, given the line active just right
    /// of `t0` and the one active just left of `t1`.
    fn pieces(&mut self, k: usize, t0: Q, l0: Line, t1: Q, l1: Line, out: &mut Vec<Piece>) {
        if t0 == t1 {
            return;
        }
        if l0 == l1 {
            let ratio = Self::value(&l0, &t1) / Self::value(&l0, &t0);
            out.push(Piece { term: k, from: t0, to: t1, ratio });
            return;
        }
        let mid = (&l1.0 - &l0.0) / (&l0.1 - &l1.1);
        let f_mid = self.lines(&mid, Side::Right)[k].clone();
        if Self::value(&f_mid, &mid) == Self::value(&l0, &mid) {
            for (a, b, l) in [(t0, mid.clone(), l0), (mid, t1, l1)] {
                if a != b {
                    let ratio = Self::value(&l, &b) / Self::value(&l, &a);
                    out.push(Piece { term: k, from: a, to: b, ratio });
                }
            }
            return;
        }
        let left = self.lines(&mid, Side::Left)[k].clone();
        self.pieces(k, t0, l0, mid.clone(), left, out);
        self.pieces(k, mid, f_mid, t1, l1, out);
    }
}

fn segment_pieces(graph: &Graph, metric: &Metric, tau: &TangentVector, duration: &Q) -> Vec<Piece> {
    let mut env = Envelope { graph, base: metric.lengths(), tau, cache: HashMap::new() };
    let zero = Q::zero();
    let right = env.lines(&zero, Side::Right);
    let left = env.lines(duration, Side::Left);
    let mut out = Vec::new();
    for k in 0..right.len() {
        env.pieces(k, zero.clone(), right[k].clone(), duration.clone(), left[k].clone(), &mut out);
    }
    out
}

/// `len_L`, `len_N` and the bookkeeping that certifies
/// `len_N − len_L = Ψ(end) − Ψ(start)`.
pub fn len_n(path: &PLPath) -> PathLengths {
    let (len_l, segments) = len_l(path);
    let states = path.states();
    let rank = path.start.rank();
    let kp1 = (k_constant(rank) + 1) as f64;
    let mut exact = true;
    let mut pieces = Vec::new();
    let mut correction = 0.0;
    for (i, step) in path.steps.iter().enumerate() {
        let (graph, metric) = &states[i];
        let (next_graph, next_metric) = &states[i + 1];
        match step {
            PathStep::Linear { direction, duration } => {
                let ps = if duration.is_zero() {
                    Vec::new()
                } else {
                    segment_pieces(graph, metric, direction, duration)
                };
                let before = psi_terms(graph, metric);
                let after = psi_terms(graph, next_metric);
                let mut products: Vec<Q> = vec![Q::from_integer(1.into()); before.len()];
                for p in &ps {
                    products[p.term] *= &p.ratio;
                    correction -= ln_q(&p.ratio);
                }
                for (k, prod) in products.iter().enumerate() {
                    if *prod != &after[k].length / &before[k].length {
                        exact = false;
                    }
                }
                pieces.push(ps);
            }
            PathStep::Collapse { .. } | PathStep::Expand { .. } => {
                let a = psi_of_metric(graph, metric).sorted_lengths();
                let b = psi_of_metric(next_graph, next_metric).sorted_lengths();
                if a != b {
                    exact = false;
                }
            }
        }
    }
    let len_n = len_l + correction / kp1;
    let psi_start = psi_of_metric(path.start.graph(), path.start.metric()).value;
    let psi_end = psi_of_metric(path.end.graph(), path.end.metric()).value;
    let residual = len_n - len_l - (psi_end - psi_start);
    PathLengths { len_l, len_n, segments, pieces, psi_start, psi_end, exact, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipschitz::stretch_factor;
    use crate::rational::q;

    fn rose_point(a: Q, b: Q) -> MarkedPoint {
        MarkedPoint::rose(Metric::new(&Graph::rose(2), vec![a, b]).unwrap()).unwrap()
    }

    #[test]
    fn constant_path_has_zero_length() {
        let x = rose_point(q(1, 3), q(2, 3));
        let r = len_n(&PLPath::constant(x));
        assert_eq!((r.len_l, r.len_n), (0.0, 0.0));
        assert!(r.exact);
    }

    #[test]
    fn straight_segment_is_a_geodesic() {
        let x = rose_point(q(1, 2), q(1, 2));
        let to = Metric::new(x.graph(), vec![q(1, 4), q(3, 4)]).unwrap();
        let p = PLPath::segment(&x, &to).unwrap();
        let (l, segs) = len_l(&p);
        assert_eq!(segs[0].factor, stretch_factor(p.start(), p.end()).unwrap());
        assert!((l - 1.5f64.ln()).abs() < 1e-12);
        let r = len_n(&p);
        assert!(r.exact);
        assert!(r.residual.abs() < 1e-12);
    }

    #[test]
    fn reverse_is_an_involution() {
        let x = rose_point(q(1, 2), q(1, 2));
        let (y, c) = x.blow_up(0, &[crate::graph::DirEdge::forward(0), crate::graph::DirEdge::forward(1)], "p", "w").unwrap();
        let tau = TangentVector::new(y.graph(), vec![q(-1, 8), q(-1, 8), q(1, 4)]).unwrap();
        let p = PLPath::new(
            x.clone(),
            vec![PathStep::Expand { collapse: c }, PathStep::Linear { direction: tau, duration: q(1, 1) }],
        )
        .unwrap();
        let rr = p.reverse().reverse();
        assert_eq!(rr.start(), p.start());
        assert_eq!(rr.end(), p.end());
        let r = len_n(&p);
        assert!(r.exact, "{r:?}");
        let back = len_n(&p.reverse());
        assert!(back.exact);
        assert!(r.residual.abs() < 1e-12 && back.residual.abs() < 1e-12);
    }

    #[test]
    fn refinement_does_not_change_lengths() {
        let g = Graph::rose(3);
        let x = MarkedPoint::rose(Metric::new(&g, vec![q(1, 10), q(3, 10), q(6, 10)]).unwrap()).unwrap();
        let to = Metric::new(&g, vec![q(6, 10), q(3, 10), q(1, 10)]).unwrap();
        let p = PLPath::segment(&x, &to).unwrap();
        let a = len_n(&p);
        let b = len_n(&p.refined(3));
        let c = len_n(&p.reparametrized(&q(5, 2)));
        assert!(a.exact && b.exact && c.exact);
        assert!((a.len_n - b.len_n).abs() < 1e-12 && (a.len_n - c.len_n).abs() < 1e-12);
        assert!((a.len_l - b.len_l).abs() < 1e-12);
        assert!(a.residual.abs() < 1e-12);
        // two petals trade places, so three summands break
        assert_eq!(a.pieces[0].len(), 217 + 3);
    }
}
