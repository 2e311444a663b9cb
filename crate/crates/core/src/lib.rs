//! Lipschitz geometry of Outer space at small rank, computed exactly.

pub mod candidates;
pub mod collapse;
pub mod error;
pub mod format;
pub mod lipschitz;
pub mod graph;
pub mod harness;
pub mod homology;
pub mod loops;
pub mod map;
pub mod paths;
pub mod marked;
pub mod metric;
pub mod potential;
pub mod rational;
pub mod z2;

pub use candidates::{enumerate_candidates, Candidate, CandidateKind, CandidateSet};
pub use collapse::ForestCollapse;
pub use error::{Error, Result};
pub use graph::{DirEdge, EdgeId, Graph, VertexId};
pub use loops::{EdgePath, Loop};
pub use map::GraphMap;
pub use marked::MarkedPoint;
pub use metric::{Metric, TangentVector};
pub use paths::{PLPath, PathStep};
pub use rational::Q;
