//! Graph orientation with vertex-type constraints: classification,
//! polynomial solvers, gadget verification, and two applications
//! (pipe-rotation puzzles and tetromino tiling).

pub mod classify;
pub mod embedding;
pub mod error;
pub mod format;
pub mod instance;
pub mod kind;
pub mod kplumber;
pub mod random;
pub mod relation;
mod search;
pub mod simulate;
pub mod solve;
pub mod tiling;

pub use error::{Error, Result};
pub use instance::{Edge, Endpoint, Instance, InstanceBuilder, Orientation};
pub use kind::{Direction, VertexKind};
pub use relation::{Relation, SymmetricSpec};
