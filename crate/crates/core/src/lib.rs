//! Exact calculus on weighted dual graphs of snc divisors on smooth
//! projective surfaces: discriminants, blow-ups and blow-downs, chain
//! standard forms, fibers of P^1-fibrations, cusp resolutions and the
//! rational-cuspidal pipeline built on them.

pub mod chain;
pub mod decimal;
pub mod error;
pub mod fibration;
pub mod generate;
pub mod graph;
pub mod lattice;
pub mod moves;
pub mod pipeline;
pub mod resolution;
pub mod shape;
pub mod verify;

pub use chain::{standardize_chain, StandardizedChain};
pub use error::{Error, Result};
pub use fibration::{enumerate_fibers, Fiber, FiberPosition, FibrationModel};
pub use graph::{SubDivisor, VertexId, Weight, WeightedGraph};
pub use lattice::{discriminant, Definiteness, IntMatrix};
pub use moves::{Move, MoveKind, MoveLog, Side};
pub use pipeline::{certify, theorem_pipeline, TheoremCertificate};
pub use resolution::{build_completion, Check, CompletionModel, CuspPair, Role};
pub use shape::{ChainType, ShapeReport};
pub use verify::{euler_open, q_acyclicity_relation, AcyclicityCheck};
