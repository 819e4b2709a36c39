//! Small named instances shared by tests, benches and the CLI examples.

use crate::cnf::Instance;

/// The eight clauses over x1, x2, x3 with every sign pattern. Unsatisfiable:
/// each total assignment falsifies exactly its complementary clause.
pub fn all_sign_patterns() -> Instance {
    let mut clauses = Vec::with_capacity(8);
    for mask in 0..8 {
        let signed = |bit: i32, v: i32| if mask >> bit & 1 == 1 { -v } else { v };
        clauses.push([signed(2, 1), signed(1, 2), signed(0, 3)]);
    }
    Instance::from_dimacs(3, &clauses).expect("fixture is valid")
}

/// `{x1, x2, x3}`.
pub fn single_clause() -> Instance {
    Instance::from_dimacs(3, &[[1, 2, 3]]).expect("fixture is valid")
}
