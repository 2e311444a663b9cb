//! Maps between graphs that send vertices to vertices and edges to edge paths.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{DirEdge, Graph, VertexId};
use crate::loops::{free_reduce, EdgePath, Loop};
use crate::rational::Q;
use crate::z2::Z2Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    source: Arc<Graph>,
    target: Arc<Graph>,
    vertex_image: Vec<VertexId>,
    /// Image of each edge in its stored direction, freely reduced.
    edge_image: Vec<Vec<DirEdge>>,
}

impl GraphMap {
    pub fn new(
        source: Arc<Graph>,
        target: Arc<Graph>,
        vertex_image: Vec<VertexId>,
        edge_image: Vec<Vec<DirEdge>>,
    ) -> Result<Self> {
        if vertex_image.len() != source.num_vertices() || edge_image.len() != source.num_edges() {
            return Err(Error::InvalidMap("image tables do not match the source graph".into()));
        }
        if vertex_image.iter().any(|&v| v >= target.num_vertices()) {
            return Err(Error::InvalidMap("vertex image out of range".into()));
        }
        let mut reduced = Vec::with_capacity(edge_image.len());
        for (e, img) in edge_image.into_iter().enumerate() {
            let edge = source.edge(e);
            let from = vertex_image[edge.tail];
            let to = vertex_image[edge.head];
            let path = EdgePath::new(&target, from, img).map_err(|err| {
                Error::InvalidMap(format!("image of {}: {err}", source.edge_name(e)))
            })?;
            if path.end(&target) != to {
                return Err(Error::InvalidMap(format!(
                    "image of {} ends at {} instead of {}",
                    source.edge_name(e),
                    target.vertex_name(path.end(&target)),
                    target.vertex_name(to)
                )));
            }
            reduced.push(free_reduce(path.edges()));
        }
        Ok(GraphMap { source, target, vertex_image, edge_image: reduced })
    }

    pub fn identity(graph: Arc<Graph>) -> Self {
        let vertex_image = (0..graph.num_vertices()).collect();
        let edge_image = (0..graph.num_edges()).map(|e| vec![DirEdge::forward(e)]).collect();
        GraphMap { source: graph.clone(), target: graph, vertex_image, edge_image }
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_image[v]
    }

    pub fn edge_image(&self, e: usize) -> &[DirEdge] {
        &self.edge_image[e]
    }

    /// Image of a directed edge; reversing the edge reverses the image.
    pub fn image_of(&self, d: DirEdge) -> Vec<DirEdge> {
        let img = &self.edge_image[d.edge()];
        if d.is_reversed() {
            img.iter().rev().map(|x| x.inverse()).collect()
        } else {
            img.clone()
        }
    }

    pub fn apply_word(&self, word: &[DirEdge]) -> Vec<DirEdge> {
        let mut out = Vec::new();
        for &d in word {
            if d.is_reversed() {
                out.extend(self.edge_image[d.edge()].iter().rev().map(|x| x.inverse()));
            } else {
                out.extend_from_slice(&self.edge_image[d.edge()]);
            }
        }
        out
    }

    /// Tightened image of a loop of the source graph.
    pub fn apply_loop(&self, lp: &Loop) -> Result<Loop> {
        Loop::from_closed_unchecked(&self.apply_word(lp.edges())).ok_or(Error::TrivialImage)
    }

    pub fn apply_path(&self, path: &EdgePath) -> EdgePath {
        let start = self.vertex_image[path.start()];
        let edges = free_reduce(&self.apply_word(path.edges()));
        EdgePath::new(&self.target, start, edges).expect("images of valid paths are valid")
    }

    /// `outer ∘ inner`, with edge images reduced.
    pub fn compose(outer: &GraphMap, inner: &GraphMap) -> Result<GraphMap> {
        if inner.target != outer.source {
            return Err(Error::GraphMismatch("inner map's target is not the outer map's source".into()));
        }
        let vertex_image = inner.vertex_image.iter().map(|&v| outer.vertex_image[v]).collect();
        let edge_image = inner
            .edge_image
            .iter()
            .map(|img| free_reduce(&outer.apply_word(img)))
            .collect();
        Ok(GraphMap {
            source: inner.source.clone(),
            target: outer.target.clone(),
            vertex_image,
            edge_image,
        })
    }

    /// Matrix of the induced map on mod-2 homology in the spanning-tree bases.
    pub fn h1_matrix(&self) -> Z2Matrix {
        let cols = (0..self.source.rank())
            .map(|i| {
                self.apply_word(&self.source.fundamental_cycle(i))
                    .iter()
                    .fold(0u64, |acc, d| acc ^ self.target.class_mask(d.edge()))
            })
            .collect();
        Z2Matrix::from_columns(self.target.rank(), cols)
    }

    pub fn is_h1_isomorphism(&self) -> bool {
        self.h1_matrix().is_invertible()
    }

    pub fn check_h1_isomorphism(&self) -> Result<()> {
        if self.is_h1_isomorphism() {
            Ok(())
        } else {
            Err(Error::NotHomologyIsomorphism)
        }
    }

    /// Length of the longest edge image.
    pub fn max_image_len(&self) -> usize {
        self.edge_image.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Length of the tightened image of each edge under `lengths` on the target.
    pub fn image_lengths(&self, lengths: &[Q]) -> Vec<Q> {
        self.edge_image
            .iter()
            .map(|img| img.iter().map(|d| &lengths[d.edge()]).sum())
            .collect()
    }

    /// Edge images as text tokens, for the file format and reports.
    pub fn image_text(&self, e: usize) -> String {
        self.target.format_word(&self.edge_image[e])
    }

    /// Builds a self-map of a one-vertex graph from words like `"a b'"`.
    pub fn rose_map(rose: Arc<Graph>, images: &[&str]) -> Result<Self> {
        if rose.num_vertices() != 1 {
            return Err(Error::InvalidMap("rose_map needs a one-vertex graph".into()));
        }
        let edge_image = images
            .iter()
            .map(|w| {
                w.split_whitespace()
                    .map(|t| {
                        rose.parse_dir_token(t)
                            .ok_or_else(|| Error::InvalidMap(format!("unknown token {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GraphMap::new(rose.clone(), rose, vec![0], edge_image)
    }
}
