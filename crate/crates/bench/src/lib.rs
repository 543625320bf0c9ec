//! Fixtures shared by the criterion benchmarks.

use minrank::generate::{random_masked, random_unicast, rng};
use minrank::{FieldSpec, MaskedMatrix};

pub const EXAMPLE: &str = "1 X 0 0 X\nX 1 X X 0\n0 0 1 1 X\n0 0 X 1 X\nX X 0 0 1\n";

pub fn example() -> MaskedMatrix {
    MaskedMatrix::parse(EXAMPLE, FieldSpec::GF2).expect("fixture parses")
}

/// Seeded 7×7 multiple-unicast matrices at 59% erasures.
pub fn unicast_7x7(count: u64) -> Vec<MaskedMatrix> {
    (0..count).map(|s| random_unicast(&mut rng(s), FieldSpec::GF2, 7, 0.59).build_matrix()).collect()
}

pub fn dense(field: FieldSpec, n: usize, seed: u64) -> MaskedMatrix {
    random_masked(&mut rng(seed), field, n, n, 0)
}
