use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed edge path: {0}")]
    MalformedPath(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid tangent vector: {0}")]
    InvalidTangent(String),

    #[error("tangent vector is not integrable at this metric (edge {edge} has negative weight and zero length)")]
    NotIntegrable { edge: String },

    #[error("invalid graph map: {0}")]
    InvalidMap(String),

    #[error("graph mismatch: {0}")]
    GraphMismatch(String),

    #[error("map does not induce an isomorphism on mod-2 homology")]
    NotHomologyIsomorphism,

    #[error("loop maps to the trivial loop")]
    TrivialImage,

    #[error("edge set is not a forest: {0}")]
    NotAForest(String),

    #[error("invalid marking: {0}")]
    InvalidMarking(String),

    #[error("the trivial homology class has no shortest representative")]
    TrivialClass,

    #[error("step leaves the closed simplex: {0}")]
    LeavesSimplex(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sampling exhausted after {attempts} attempts: {reason}")]
    SamplingExhausted { attempts: usize, reason: String },

    #[error("word length budget of {budget} exceeded")]
    WordBudget { budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
