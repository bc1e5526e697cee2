//! Balanced 3-valent graphs over the 2-local integers.
//!
//! A balanced graph assigns a plane vector to every directed edge of a cubic
//! multigraph so that reversing an edge negates its vector and the three
//! vectors arriving at any vertex sum to zero. The multiplicity of a vertex
//! is the 2-adic valuation of the determinant of two of its vectors. The
//! central fact checked here is that the number of vertices of minimal
//! multiplicity is always even.
//!
//! * [`dyadic`]: exact rationals, 2-adic valuation, plane vectors.
//! * [`lattice`]: 2-local lattices of rank at most 2.
//! * [`graph`]: balanced graphs, vertex lattices, census, primitive cycles.
//! * [`reduction`]: the descent on the minimum with a checkable certificate.
//! * [`dissection`]: triangle dissections of balanced polygons and their dual graphs.
//! * [`gen`]: seeded random instances.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod dissection;
pub mod dyadic;
pub mod gen;
pub mod graph;
pub mod lattice;
pub mod reduction;

pub use dyadic::{Scalar, Val2, Vector};
pub use graph::{BalancedGraph, Parity, VertexCensus};
pub use lattice::Lattice;
pub use reduction::{reduce_and_certify, verify_certificate, ParityCertificate};
