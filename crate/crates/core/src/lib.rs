//! Mod-3 orientations of plane multigraphs: instances, cut structure, graph
//! classes, an exact search oracle, a reduction-based solver and generators
//! for instances without valid orientations.

pub mod classes;
pub mod cuts;
pub mod error;
pub mod face_rules;
pub mod families;
pub mod flow;
pub mod format;
pub mod graph;
pub mod instance;
pub mod mutate;
pub mod oracle;
pub mod reducer;
pub mod z3;

pub use error::{Error, Result};
pub use graph::{Dart, EdgeId, Faces, Graph, VertexId};
pub use instance::{Instance, InstanceSpec, Mark, Marks, Orientation, SpecifiedFaces, VerifyReport};
pub use z3::Z3;
