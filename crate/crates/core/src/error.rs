use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("cannot compare a directed graph with an undirected graph")]
    DirectednessMismatch,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("brute-force oracle accepts at most {limit} vertices per graph, got {order}")]
    OracleTooLarge { order: usize, limit: usize },
}
