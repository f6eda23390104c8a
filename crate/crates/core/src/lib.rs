//! Splitting Gibbs measures of the q-state Potts model on a Cayley tree,
//! built from a two-valued boundary field prescribed by an integer matrix
//! `(a b; c d)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: parameters, the compatibility map `F` and the scalar maps
//!   `f` and `phi` with their derivatives.
//! * [`solvers`]: enumeration of fixed points of the translation-invariant
//!   equation, the pair systems and the four-variable system.
//! * [`tree`]: truncated trees, label assignment, the vertex-wise
//!   compatibility check and exact finite-volume measures.
//! * [`classify`]: matching a matrix and solution against known measure
//!   classes.

pub mod classify;
pub mod error;
pub mod model;
pub mod solvers;
pub mod tree;

pub use classify::{classify, Classification, MeasureClass};
pub use error::{Error, Result};
pub use model::{
    compatibility_map, critical_theta_ti, scalar_f, scalar_f_deriv, scalar_phi, scalar_phi_deriv,
    theorem2_condition, BoundaryMatrix, ConditionCheck, FieldVec, ModelParams, ScalarKind,
};
pub use solvers::{
    find_roots_1d, solve_pair_system, solve_system6, solve_ti, solve_weakly_periodic, w_map,
    InvariantTag, PairSolution, QuadSolution, SolveOutcome, SolverConfig,
};
pub use tree::{
    assign_labels, build_tree, consistency_check, finite_volume_measure, verify_compatibility,
    BoundaryAssignment, Configuration, Label, TruncatedTree,
};
