use thiserror::Error;

use crate::graph::{Dart, EdgeId, VertexId};
use crate::z3::Z3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeId),
    #[error("malformed rotation at vertex {vertex}: {reason}")]
    MalformedRotation { vertex: VertexId, reason: String },
    #[error("embedding is not planar: V - E + F = {euler}, expected 1 + C = {expected}")]
    NonPlanar { euler: i64, expected: i64 },
    #[error("invalid prescription: values sum to {0} (mod 3)")]
    InvalidPrescription(Z3),
    #[error("directed vertex {vertex} has residual {residual} but prescription {prescription}")]
    DirectedResidual { vertex: VertexId, residual: Z3, prescription: Z3 },
    #[error("directed vertex {vertex} has unoriented edge {edge}")]
    UnorientedAtDirected { vertex: VertexId, edge: EdgeId },
    #[error("vertex {vertex} is not an endpoint of edge {edge}")]
    NotIncident { vertex: VertexId, edge: EdgeId },
    #[error("vertex {0} carries more than one mark")]
    DuplicateMark(VertexId),
    #[error("face handle {0:?} does not name a dart of the embedding")]
    BadFaceHandle(Dart),
    #[error("orientation of edge {edge} disagrees with the fixed direction")]
    OrientationConflict { edge: EdgeId },
    #[error("edge {0} is not oriented")]
    Unoriented(EdgeId),
    #[error("edge {0} is already oriented")]
    AlreadyOriented(EdgeId),
    #[error("no orientation of vertex {0} meets its prescription")]
    NoVertexOrientation(VertexId),
    #[error("deleting vertex {vertex} would drop an unbalanced prescription {leftover}")]
    UnbalancedDeletion { vertex: VertexId, leftover: Z3 },
    #[error("edges {0} and {1} cannot be lifted: {2}")]
    BadLift(EdgeId, EdgeId, String),
    #[error("cannot contract: {0}")]
    BadContraction(String),
    #[error("{0}")]
    MissingFace(String),
    #[error("instance has {free} unoriented edges, above the enumeration budget of {budget}")]
    BudgetExceeded { free: usize, budget: usize },
    #[error("malformed family parameters: {0}")]
    BadFamily(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
