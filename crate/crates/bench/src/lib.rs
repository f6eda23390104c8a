//! Fixtures shared by the criterion benches.

use potts_core::{build_tree, BoundaryAssignment, BoundaryMatrix, FieldVec, Label, ModelParams, TruncatedTree};

/// Matrices exercising each structured case of the pair solver.
pub fn pair_cases() -> Vec<(&'static str, BoundaryMatrix)> {
    [
        ("a_eq_c", (1, 2, 1, 2)),
        ("a_zero", (0, 3, 3, 0)),
        ("b_zero", (3, 0, 1, 2)),
        ("general", (2, 1, 3, 0)),
    ]
    .into_iter()
    .map(|(name, (a, b, c, d))| (name, BoundaryMatrix::new(a, b, c, d).expect("valid matrix")))
    .collect()
}

/// A two-periodic labelling of the order-`k` tree with a fixed non-trivial field.
pub fn enumeration_fixture(k: usize, depth: usize, theta: f64) -> (TruncatedTree, BoundaryAssignment, ModelParams) {
    let tree = build_tree(k, depth).expect("tree fits");
    let m = BoundaryMatrix::new(0, k, k, 0).expect("valid matrix");
    let asg = BoundaryAssignment::new(
        &tree,
        m,
        Label::H,
        FieldVec::pair(0.9, -0.2).expect("finite"),
        FieldVec::pair(-0.4, 0.3).expect("finite"),
    )
    .expect("matching tree");
    let params = ModelParams::new(3, k, theta).expect("positive theta");
    (tree, asg, params)
}
