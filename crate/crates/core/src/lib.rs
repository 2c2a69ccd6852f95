//! SNORT on simple graphs: an exact outcome solver, opposability and
//! almost-opposability witnesses, φ-products, the named constructions and
//! chessboard families, and exhaustive search over small graphs.

pub mod canon;
pub mod chess;
pub mod constructions;
pub mod expr;
pub mod graph;
pub mod graph6;
pub mod opposition;
pub mod products;
pub mod search;
pub mod snort;
pub mod verify;

pub use graph::{Distance, Graph, GraphError, NamedGraph, VertexMap, VertexSet};
pub use snort::{MoveError, OutcomeClass, Player, Position, Solver, SolverConfig, VertexState};
