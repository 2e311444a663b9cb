//! Points of a simplex (metrics) and tangent vectors at them.

use std::ops::{Add, Neg};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::loops::Loop;
use crate::rational::Q;

/// True when the edges contain no circle.
pub fn is_forest(graph: &Graph, edges: &[EdgeId]) -> bool {
    let mut parent: Vec<usize> = (0..graph.num_vertices()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut seen = std::collections::HashSet::new();
    for &e in edges {
        if !seen.insert(e) {
            continue;
        }
        let edge = graph.edge(e);
        let (a, b) = (find(&mut parent, edge.tail), find(&mut parent, edge.head));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Edge lengths in `[0, 1]` summing to one whose zero set is a forest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Metric {
    lengths: Vec<Q>,
}

impl Metric {
    pub fn new(graph: &Graph, lengths: Vec<Q>) -> Result<Self> {
        if lengths.len() != graph.num_edges() {
            return Err(Error::InvalidMetric(format!(
                "expected {} lengths, got {}",
                graph.num_edges(),
                lengths.len()
            )));
        }
        if let Some(e) = lengths.iter().position(|l| l.is_negative()) {
            return Err(Error::InvalidMetric(format!("edge {} has negative length", graph.edge_name(e))));
        }
        let total: Q = lengths.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidMetric(format!("lengths sum to {total}, not 1")));
        }
        let zeros: Vec<EdgeId> = (0..lengths.len()).filter(|&e| lengths[e].is_zero()).collect();
        if !is_forest(graph, &zeros) {
            return Err(Error::InvalidMetric("zero-length edges contain a circle".into()));
        }
        Ok(Metric { lengths })
    }

    /// Normalizes nonnegative weights to total length one.
    pub fn from_weights(graph: &Graph, weights: &[Q]) -> Result<Self> {
        let total: Q = weights.iter().sum();
        if !total.is_positive() {
            return Err(Error::InvalidMetric("weights must have positive sum".into()));
        }
        Metric::new(graph, weights.iter().map(|w| w / &total).collect())
    }

    /// All edges of equal length.
    pub fn uniform(graph: &Graph) -> Self {
        let n = graph.num_edges() as i64;
        Metric { lengths: vec![crate::rational::q(1, n); graph.num_edges()] }
    }

    pub fn lengths(&self) -> &[Q] {
        &self.lengths
    }

    pub fn length(&self, e: EdgeId) -> &Q {
        &self.lengths[e]
    }

    pub fn loop_length(&self, lp: &Loop) -> Q {
        lp.weigh(&self.lengths)
    }

    pub fn zero_edges(&self) -> Vec<EdgeId> {
        (0..self.lengths.len()).filter(|&e| self.lengths[e].is_zero()).collect()
    }

    pub fn is_interior(&self) -> bool {
        self.lengths.iter().all(|l| l.is_positive())
    }

    /// `self + t·tau`, validated.
    pub fn moved(&self, graph: &Graph, tau: &TangentVector, t: &Q) -> Result<Metric> {
        let lengths: Vec<Q> = self
            .lengths
            .iter()
            .zip(tau.weights())
            .map(|(l, w)| l + t * w)
            .collect();
        if let Some(e) = lengths.iter().position(|l| l.is_negative()) {
            return Err(Error::LeavesSimplex(format!("edge {} would get negative length", graph.edge_name(e))));
        }
        Metric::new(graph, lengths).map_err(|e| Error::LeavesSimplex(e.to_string()))
    }

    /// Largest `t` with `self + t·tau` in the closed simplex; `None` if unbounded
    /// (only for `tau = 0`).
    pub fn max_step(&self, tau: &TangentVector) -> Option<Q> {
        self.lengths
            .iter()
            .zip(tau.weights())
            .filter(|(_, w)| w.is_negative())
            .map(|(l, w)| -(l / w))
            .min()
    }
}

/// Edge weights summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TangentVector {
    weights: Vec<Q>,
}

impl TangentVector {
    pub fn new(graph: &Graph, weights: Vec<Q>) -> Result<Self> {
        if weights.len() != graph.num_edges() {
            return Err(Error::InvalidTangent(format!(
                "expected {} weights, got {}",
                graph.num_edges(),
                weights.len()
            )));
        }
        let total: Q = weights.iter().sum();
        if !total.is_zero() {
            return Err(Error::InvalidTangent(format!("weights sum to {total}, not 0")));
        }
        Ok(TangentVector { weights })
    }

    pub fn zero(graph: &Graph) -> Self {
        TangentVector { weights: vec![Q::zero(); graph.num_edges()] }
    }

    /// The direction from `from` to `to` (same graph).
    pub fn between(from: &Metric, to: &Metric) -> Self {
        TangentVector {
            weights: to.lengths().iter().zip(from.lengths()).map(|(b, a)| b - a).collect(),
        }
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|w| w.is_zero())
    }

    /// `tau(e) < 0` only where `l(e) > 0`.
    pub fn is_integrable(&self, metric: &Metric) -> bool {
        self.non_integrable_edge(metric).is_none()
    }

    pub fn check_integrable(&self, graph: &Graph, metric: &Metric) -> Result<()> {
        match self.non_integrable_edge(metric) {
            Some(e) => Err(Error::NotIntegrable { edge: graph.edge_name(e).to_string() }),
            None => Ok(()),
        }
    }

    fn non_integrable_edge(&self, metric: &Metric) -> Option<EdgeId> {
        (0..self.weights.len()).find(|&e| self.weights[e].is_negative() && metric.length(e).is_zero())
    }

    pub fn value(&self, lp: &Loop) -> Q {
        lp.weigh(&self.weights)
    }

    pub fn scaled(&self, c: &Q) -> Self {
        TangentVector { weights: self.weights.iter().map(|w| w * c).collect() }
    }
}

impl Neg for &TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        TangentVector { weights: self.weights.iter().map(|w| -w).collect() }
    }
}

impl Add for &TangentVector {
    type Output = TangentVector;
    fn add(self, other: &TangentVector) -> TangentVector {
        assert_eq!(self.weights.len(), other.weights.len());
        TangentVector { weights: self.weights.iter().zip(&other.weights).map(|(a, b)| a + b).collect() }
    }
}
