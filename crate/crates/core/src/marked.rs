//! Marked metric graphs: points of Outer space.
//!
//! A point carries its marking in both directions: `marking_in: R_n → Γ` and
//! a homotopy inverse `marking_out: Γ → R_n`. Every operation producing a
//! new point updates both, so inverses of free-group automorphisms never have
//! to be computed.

use std::sync::Arc;

use crate::collapse::{blow_up, ForestCollapse};
use crate::error::{Error, Result};
use crate::graph::{DirEdge, EdgeId, Graph, VertexId};
use crate::map::GraphMap;
use crate::metric::Metric;
use crate::z2::Z2Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPoint {
    graph: Arc<Graph>,
    metric: Metric,
    marking_in: GraphMap,
    marking_out: GraphMap,
}

impl MarkedPoint {
    pub fn new(metric: Metric, marking_in: GraphMap, marking_out: GraphMap) -> Result<Self> {
        let graph = marking_in.target().clone();
        let rose = marking_in.source();
        if rose.num_vertices() != 1 || rose.rank() != graph.rank() {
            return Err(Error::InvalidMarking(format!(
                "marking must start at the rose of rank {}",
                graph.rank()
            )));
        }
        if marking_out.source() != &graph || marking_out.target() != rose {
            return Err(Error::InvalidMarking("marking_out must map the graph back to the rose".into()));
        }
        if metric.lengths().len() != graph.num_edges() {
            return Err(Error::InvalidMarking("metric does not fit the graph".into()));
        }
        let round = GraphMap::compose(&marking_out, &marking_in)?;
        if round.h1_matrix() != Z2Matrix::identity(rose.rank()) {
            return Err(Error::InvalidMarking(
                "marking_out ∘ marking_in is not the identity on mod-2 homology".into(),
            ));
        }
        Ok(MarkedPoint { graph, metric, marking_in, marking_out })
    }

    /// The rose with the identity marking.
    pub fn rose(metric: Metric) -> Result<Self> {
        let n = metric.lengths().len();
        let rose = Arc::new(Graph::rose(n));
        let metric = Metric::new(&rose, metric.lengths().to_vec())?;
        let id = GraphMap::identity(rose);
        MarkedPoint::new(metric, id.clone(), id)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn rank(&self) -> usize {
        self.graph.rank()
    }

    pub fn marking_in(&self) -> &GraphMap {
        &self.marking_in
    }

    pub fn marking_out(&self) -> &GraphMap {
        &self.marking_out
    }

    /// Same marked graph, different metric.
    pub fn with_metric(&self, metric: Metric) -> Result<Self> {
        let metric = Metric::new(&self.graph, metric.lengths().to_vec())?;
        Ok(MarkedPoint { metric, ..self.clone() })
    }

    /// A difference of markings from `self` to `other`:
    /// `other.marking_in ∘ self.marking_out`.
    pub fn difference_to(&self, other: &MarkedPoint) -> Result<GraphMap> {
        if self.rank() != other.rank() {
            return Err(Error::GraphMismatch("points of different rank".into()));
        }
        GraphMap::compose(&other.marking_in, &self.marking_out)
    }

    /// Right action `(Γ, f, ℓ)·Φ = (Γ, f∘Φ, ℓ)`. `phi_inv` must be a homotopy
    /// inverse of `phi`; only the mod-2 shadow of that is checked.
    pub fn act_by_automorphism(&self, phi: &GraphMap, phi_inv: &GraphMap) -> Result<Self> {
        let rose = self.marking_in.source();
        for m in [phi, phi_inv] {
            if m.source() != rose || m.target() != rose {
                return Err(Error::GraphMismatch("automorphisms must be self-maps of the rose".into()));
            }
        }
        phi.check_h1_isomorphism()?;
        let round = GraphMap::compose(phi, phi_inv)?;
        if round.h1_matrix() != Z2Matrix::identity(rose.rank()) {
            return Err(Error::InvalidMarking("supplied inverse does not invert the automorphism".into()));
        }
        let marking_in = GraphMap::compose(&self.marking_in, phi)?;
        let marking_out = GraphMap::compose(phi_inv, &self.marking_out)?;
        MarkedPoint::new(self.metric.clone(), marking_in, marking_out)
    }

    /// Moves to the face where `forest` has length zero, represented in `Γ/F`.
    pub fn collapse(&self, forest: &[EdgeId]) -> Result<Self> {
        let c = ForestCollapse::new(self.graph.clone(), forest)?;
        self.collapse_by(&c)
    }

    pub fn collapse_by(&self, c: &ForestCollapse) -> Result<Self> {
        if c.source() != &self.graph {
            return Err(Error::GraphMismatch("collapse is for a different graph".into()));
        }
        let metric = c.push_metric(&self.metric)?;
        let marking_in = GraphMap::compose(c.projection(), &self.marking_in)?;
        let marking_out = GraphMap::compose(&self.marking_out, c.section())?;
        MarkedPoint::new(metric, marking_in, marking_out)
    }

    /// Inverse of [`collapse_by`](Self::collapse_by): views this point, on
    /// `Γ/F`, as a point of the face of `Γ`.
    pub fn expand_by(&self, c: &ForestCollapse) -> Result<Self> {
        if c.quotient() != &self.graph {
            return Err(Error::GraphMismatch("point does not live on the collapsed graph".into()));
        }
        let metric = c.pull_metric(&self.metric);
        let marking_in = GraphMap::compose(c.section(), &self.marking_in)?;
        let marking_out = GraphMap::compose(&self.marking_out, c.projection())?;
        MarkedPoint::new(metric, marking_in, marking_out)
    }

    /// Blows up vertex `v` (see [`blow_up`]); the new edge has length zero.
    pub fn blow_up(&self, v: VertexId, moved: &[DirEdge], new_vertex: &str, new_edge: &str) -> Result<(Self, ForestCollapse)> {
        let big = Arc::new(blow_up(&self.graph, v, moved, new_vertex, new_edge)?);
        let c = ForestCollapse::new(big.clone(), &[big.num_edges() - 1])?;
        let point = self.expand_by(&c)?;
        Ok((point, c))
    }

    /// Largest image length among the two markings.
    pub fn marking_size(&self) -> usize {
        self.marking_in.max_image_len().max(self.marking_out.max_image_len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::Loop;
    use crate::rational::q;

    fn fib() -> (GraphMap, GraphMap) {
        let r = Arc::new(Graph::rose(2));
        (
            GraphMap::rose_map(r.clone(), &["a b", "a"]).unwrap(),
            GraphMap::rose_map(r, &["b", "b' a"]).unwrap(),
        )
    }

    #[test]
    fn action_by_identity_and_fibonacci() {
        let x = MarkedPoint::rose(Metric::new(&Graph::rose(2), vec![q(1, 3), q(2, 3)]).unwrap()).unwrap();
        let id = GraphMap::identity(x.marking_in().source().clone());
        assert_eq!(x.act_by_automorphism(&id, &id).unwrap(), x);
        let (phi, inv) = fib();
        let y = x.act_by_automorphism(&phi, &inv).unwrap();
        assert_eq!(y.metric(), x.metric());
        assert_eq!(y.marking_in().image_text(0), "a b");
        // difference of markings x → y is Φ itself
        let d = x.difference_to(&y).unwrap();
        assert_eq!(d, phi);
        assert!(x.act_by_automorphism(&phi, &phi).is_err());
    }

    #[test]
    fn blow_up_collapse_preserves_loop_lengths() {
        let x = MarkedPoint::rose(Metric::new(&Graph::rose(2), vec![q(1, 3), q(2, 3)]).unwrap()).unwrap();
        let (y, c) = x.blow_up(0, &[DirEdge::forward(0), DirEdge::forward(1)], "p", "w").unwrap();
        assert_eq!(y.graph().num_vertices(), 2);
        let back = y.collapse_by(&c).unwrap();
        assert_eq!(back.graph(), x.graph());
        assert_eq!(back.metric(), x.metric());
        let phi = x.difference_to(&y).unwrap();
        let r = x.graph();
        for w in ["a", "b", "a b", "a b'"] {
            let lp = Loop::parse(r, w).unwrap().unwrap();
            let img = phi.apply_loop(&lp).unwrap();
            assert_eq!(x.metric().loop_length(&lp), y.metric().loop_length(&img));
        }
    }
}
