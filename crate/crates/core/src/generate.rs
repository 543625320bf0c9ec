//! Seeded random instances for tests, benchmarks and the `bench` command.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::FieldSpec;
use crate::index_coding::{IndexCodingProblem, Receiver};
use crate::masked::MaskedMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform known entries with exactly `erasures` erased positions.
pub fn random_masked<R: Rng>(rng: &mut R, field: FieldSpec, rows: usize, cols: usize, erasures: usize) -> MaskedMatrix {
    let total = rows * cols;
    let erased = sample(rng, total, erasures.min(total)).into_vec();
    let mut mask = vec![false; total];
    for i in erased {
        mask[i] = true;
    }
    let values: Vec<u8> = (0..total).map(|_| rng.random_range(0..field.q())).collect();
    MaskedMatrix::from_fn(field, rows, cols, |r, c| {
        let i = r * cols + c;
        (!mask[i]).then_some(values[i])
    })
}

/// A multiple-unicast instance: receiver `j` wants message `j`, and
/// `round(erasure_fraction · n²)` off-diagonal pairs are side information.
pub fn random_unicast<R: Rng>(rng: &mut R, field: FieldSpec, n: usize, erasure_fraction: f64) -> IndexCodingProblem {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let want = ((erasure_fraction * (n * n) as f64).round() as usize).min(off.len());
    let mut has = vec![Vec::new(); n];
    for k in sample(rng, off.len(), want).into_vec() {
        let (i, j) = off[k];
        has[j].push(i);
    }
    let receivers = has
        .into_iter()
        .enumerate()
        .map(|(j, mut h)| {
            h.sort_unstable();
            Receiver { label: j + 1, wants: j, has: h }
        })
        .collect();
    IndexCodingProblem { field, block_length: 1, message_count: n, receivers }
}
