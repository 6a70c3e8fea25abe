//! Polynomial-time reduction from monotone NAE-3SAT to the triangle-free cut
//! problem on 5-colourable graphs of maximum degree 8, together with the
//! reverse extraction (triangles become clauses) and exact search oracles
//! that check every equivalence on small instances.
//!
//! The pipeline is:
//!
//! 1. [`transform::split_repeated_variables`] rewrites a monotone 3-CNF so
//!    that every variable occurs at most three times, chaining the copies of
//!    a repeated variable with `(y_i ∨ ¬y_{i+1})` equality clauses.
//! 2. [`reduction::build_graph`] turns each 3-clause into a triangle and each
//!    equality clause into a glued-tetrahedra gadget.
//! 3. [`reduction::assignment_to_cut`] and [`reduction::cut_to_assignment`]
//!    translate certificates between the two problems, and
//!    [`reduction::extract_nae`] maps any graph back to a monotone 3-CNF.
//!
//! [`solvers`] holds the exact oracles and [`roundtrip`] the driver that
//! checks all of it instance by instance.

pub mod certs;
pub mod error;
pub mod formula;
pub mod graphs;
pub mod reduction;
pub mod roundtrip;
pub mod solvers;
pub mod transform;

pub use error::{Error, Result};
pub use formula::{Assignment, Clause, CnfFormula, Literal, Var};
pub use graphs::{Colouring, Cut, Graph, Vertex};
pub use reduction::{Gadget, ReductionMap};
pub use solvers::SearchBudget;
pub use transform::{Properties, TransformMap};
