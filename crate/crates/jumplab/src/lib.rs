//! Exact potential theory on resistive multigraphs.
//!
//! The crate computes Green's functions of resistive networks over the
//! rationals (no floating point anywhere), height-jump multiplicities of
//! edge-labelled multigraphs under test-curve pullbacks, and alignment of
//! labelled graphs, together with independent combinatorial oracles
//! (spanning-tree / 2-forest ratios, cycle enumeration) used to cross-check
//! every linear-algebra path.

pub mod graph;
pub mod green;
pub mod jump;
pub mod labels;
pub mod ratlin;

pub use graph::{EdgeId, MultiGraph, VertexId};
pub use green::{CombinatorialDivisor, ResistanceAssignment};
pub use labels::{AlignmentVerdict, BoundaryBasis, Label, LabelledGraph, OrderVector};
pub use ratlin::{RatMatrix, Rational};

/// Errors shared by all modules. Each operation documents which variants it
/// can produce.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("network has more than one connected component")]
    DisconnectedNetwork,
    #[error("edge {0} has non-positive resistance")]
    NonPositiveResistance(EdgeId),
    #[error("edge {0} has negative resistance")]
    NegativeResistance(EdgeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {0} carries no label")]
    UnlabelledEdge(EdgeId),
    #[error("{edges} edges exceed the enumeration bound {bound}")]
    TooLargeForEnumeration { edges: usize, bound: usize },
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("basis mismatch: expected rank {expected}, got {got}")]
    BasisMismatch { expected: usize, got: usize },
    #[error("zero label on edge {0}: labelled graph is not canonical")]
    NonCanonicalLabel(EdgeId),
    #[error("divisor has nonzero total degree")]
    NonZeroDegree,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid boundary basis: {0}")]
    InvalidBasis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
