//! Forest collapses and their inverses (blow-ups).
//!
//! Collapsing a forest `F ⊂ Γ` identifies the simplex of `Γ/F` with the face
//! of the simplex of `Γ` where `F` has length zero. Quotient vertices are named
//! after the lowest-index vertex of their component and keep that vertex's
//! relative order; surviving edges keep their names and order. With that
//! convention, collapsing the new edge of a [`blow_up`] returns exactly the
//! graph that was blown up.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{DirEdge, Edge, EdgeId, Graph, VertexId};
use crate::map::GraphMap;
use crate::metric::{is_forest, Metric, TangentVector};
use crate::rational::Q;

#[derive(Debug, Clone)]
pub struct ForestCollapse {
    source: Arc<Graph>,
    forest: Vec<EdgeId>,
    quotient: Arc<Graph>,
    projection: GraphMap,
    section: GraphMap,
    edge_map: Vec<Option<EdgeId>>,
}

impl ForestCollapse {
    pub fn new(source: Arc<Graph>, forest: &[EdgeId]) -> Result<Self> {
        let mut forest = forest.to_vec();
        forest.sort_unstable();
        forest.dedup();
        if let Some(&e) = forest.iter().find(|&&e| e >= source.num_edges()) {
            return Err(Error::NotAForest(format!("edge index {e} out of range")));
        }
        if !is_forest(&source, &forest) {
            return Err(Error::NotAForest(
                forest.iter().map(|&e| source.edge_name(e)).collect::<Vec<_>>().join(" "),
            ));
        }
        let nv = source.num_vertices();
        let mut in_forest = vec![false; source.num_edges()];
        for &e in &forest {
            in_forest[e] = true;
        }

        // Components of the forest; `rep` is the lowest-index vertex of each.
        // `toward_rep[v]` is the forest edge leading from v one step closer to it.
        let mut comp = vec![usize::MAX; nv];
        let mut toward_rep: Vec<Option<DirEdge>> = vec![None; nv];
        let mut reps = Vec::new();
        for v in 0..nv {
            if comp[v] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(v);
            comp[v] = id;
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for &d in source.out_edges(x) {
                    if !in_forest[d.edge()] {
                        continue;
                    }
                    let y = source.head(d);
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        toward_rep[y] = Some(d.inverse());
                        stack.push(y);
                    }
                }
            }
        }

        let mut edge_map = vec![None; source.num_edges()];
        let mut q_edges = Vec::new();
        for (e, edge) in source.edges().iter().enumerate() {
            if !in_forest[e] {
                edge_map[e] = Some(q_edges.len());
                q_edges.push(Edge { name: edge.name.clone(), tail: comp[edge.tail], head: comp[edge.head] });
            }
        }
        let q_vertices = reps.iter().map(|&v| source.vertex_name(v).to_string()).collect();
        let quotient = Arc::new(
            Graph::new(q_vertices, q_edges)
                .map_err(|e| Error::NotAForest(format!("collapse produced an invalid graph: {e}")))?,
        );

        let projection = GraphMap::new(
            source.clone(),
            quotient.clone(),
            comp.clone(),
            (0..source.num_edges())
                .map(|e| edge_map[e].map(DirEdge::forward).into_iter().collect())
                .collect(),
        )?;

        let to_rep = |mut v: VertexId| {
            let mut path = Vec::new();
            while let Some(d) = toward_rep[v] {
                path.push(d);
                v = source.head(d);
            }
            path
        };
        let mut section_images = vec![Vec::new(); quotient.num_edges()];
        for (e, edge) in source.edges().iter().enumerate() {
            if let Some(qe) = edge_map[e] {
                let mut img: Vec<DirEdge> = to_rep(edge.tail).iter().rev().map(|d| d.inverse()).collect();
                img.push(DirEdge::forward(e));
                img.extend(to_rep(edge.head));
                section_images[qe] = img;
            }
        }
        let section = GraphMap::new(quotient.clone(), source.clone(), reps.clone(), section_images)?;

        Ok(ForestCollapse { source, forest, quotient, projection, section, edge_map })
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn forest(&self) -> &[EdgeId] {
        &self.forest
    }

    pub fn quotient(&self) -> &Arc<Graph> {
        &self.quotient
    }

    /// `Γ → Γ/F`.
    pub fn projection(&self) -> &GraphMap {
        &self.projection
    }

    /// A homotopy inverse `Γ/F → Γ` of the projection.
    pub fn section(&self) -> &GraphMap {
        &self.section
    }

    pub fn edge_map(&self) -> &[Option<EdgeId>] {
        &self.edge_map
    }

    /// Restricts a metric vanishing on the forest to the quotient.
    pub fn push_metric(&self, metric: &Metric) -> Result<Metric> {
        if let Some(&e) = self.forest.iter().find(|&&e| !metric.length(e).is_zero()) {
            return Err(Error::InvalidMetric(format!(
                "edge {} has positive length; only zero-length forests can be collapsed",
                self.source.edge_name(e)
            )));
        }
        let lengths = self.kept(metric.lengths());
        Metric::new(&self.quotient, lengths)
    }

    /// Extends a metric on the quotient by zero on the forest.
    pub fn pull_metric(&self, metric: &Metric) -> Metric {
        Metric::new(&self.source, self.spread(metric.lengths())).expect("face inclusion preserves validity")
    }

    pub fn push_tangent(&self, tau: &TangentVector) -> Result<TangentVector> {
        if let Some(&e) = self.forest.iter().find(|&&e| !tau.weights()[e].is_zero()) {
            return Err(Error::InvalidTangent(format!(
                "weight on collapsed edge {} must vanish",
                self.source.edge_name(e)
            )));
        }
        TangentVector::new(&self.quotient, self.kept(tau.weights()))
    }

    pub fn pull_tangent(&self, tau: &TangentVector) -> TangentVector {
        TangentVector::new(&self.source, self.spread(tau.weights())).expect("sum is preserved")
    }

    fn kept(&self, values: &[Q]) -> Vec<Q> {
        (0..values.len())
            .filter(|&e| self.edge_map[e].is_some())
            .map(|e| values[e].clone())
            .collect()
    }

    fn spread(&self, values: &[Q]) -> Vec<Q> {
        self.edge_map
            .iter()
            .map(|m| m.map_or_else(Q::zero, |qe| values[qe].clone()))
            .collect()
    }
}

/// Splits vertex `v` in two, joined by a new edge `new_edge` from `v` to the
/// new vertex (appended last). The half-edges in `moved` (directed edges
/// leaving `v`) are reattached to the new vertex.
pub fn blow_up(
    graph: &Graph,
    v: VertexId,
    moved: &[DirEdge],
    new_vertex: &str,
    new_edge: &str,
) -> Result<Graph> {
    let out = graph.out_edges(v);
    let mut moved = moved.to_vec();
    moved.sort_unstable();
    moved.dedup();
    if moved.iter().any(|d| !out.contains(d)) {
        return Err(Error::InvalidGraph("moved half-edges must leave the split vertex".into()));
    }
    if moved.len() < 2 || out.len() - moved.len() < 2 {
        return Err(Error::InvalidGraph(
            "each side of a blow-up needs at least two old half-edges".into(),
        ));
    }
    let nv = graph.num_vertices();
    let mut vertices = graph.vertex_names().to_vec();
    vertices.push(new_vertex.to_string());
    let mut edges = graph.edges().to_vec();
    for d in &moved {
        let edge = &mut edges[d.edge()];
        if d.is_reversed() {
            edge.head = nv;
        } else {
            edge.tail = nv;
        }
    }
    edges.push(Edge { name: new_edge.to_string(), tail: v, head: nv });
    Graph::new(vertices, edges)
}

/// A name with the given prefix not used by any vertex or edge.
pub fn fresh_name(graph: &Graph, prefix: &str) -> String {
    (0..)
        .map(|i| format!("{prefix}{i}"))
        .find(|n| graph.find_vertex(n).is_none() && graph.find_edge(n).is_none())
        .expect("unbounded search")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::barbell;
    use crate::loops::Loop;
    use crate::rational::q;

    #[test]
    fn empty_forest_is_identity() {
        let g = Arc::new(barbell());
        let c = ForestCollapse::new(g.clone(), &[]).unwrap();
        assert_eq!(**c.quotient(), *g);
        assert_eq!(*c.projection(), GraphMap::identity(g.clone()));
    }

    #[test]
    fn barbell_collapses_to_figure_eight() {
        let g = Arc::new(barbell());
        let c = ForestCollapse::new(g.clone(), &[1]).unwrap();
        let fig = c.quotient();
        assert_eq!(fig.num_vertices(), 1);
        assert_eq!(fig.rank(), 2);
        let bar = Loop::parse(&g, "u w v w'").unwrap().unwrap();
        let img = c.projection().apply_loop(&bar).unwrap();
        assert_eq!(img, Loop::parse(fig, "u v").unwrap().unwrap());

        let l = Metric::new(&g, vec![q(1, 3), q(0, 1), q(2, 3)]).unwrap();
        let l2 = c.push_metric(&l).unwrap();
        assert_eq!(l.loop_length(&bar), l2.loop_length(&img));
        assert_eq!(c.pull_metric(&l2), l);

        // section then projection is the identity on edge images
        let round = GraphMap::compose(c.projection(), c.section()).unwrap();
        assert_eq!(round, GraphMap::identity(fig.clone()));
    }

    #[test]
    fn rejects_circles() {
        let g = Arc::new(barbell());
        assert!(matches!(ForestCollapse::new(g, &[0]), Err(Error::NotAForest(_))));
    }

    #[test]
    fn blow_up_then_collapse_round_trips() {
        let r = Graph::rose(2);
        let theta = blow_up(&r, 0, &[DirEdge::forward(0), DirEdge::forward(1)], "p", "w").unwrap();
        assert_eq!(theta.num_vertices(), 2);
        assert!((0..2).all(|v| theta.valence(v) == 3));
        let c = ForestCollapse::new(Arc::new(theta), &[2]).unwrap();
        assert_eq!(**c.quotient(), r);
        assert!(blow_up(&r, 0, &[DirEdge::forward(0)], "p", "w").is_err());
    }
}
