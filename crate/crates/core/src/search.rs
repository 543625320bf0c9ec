//! Randomized search for a maximal complete sub-matrix of highest rank.
//!
//! Starting from all rows and no columns, each iteration picks the row set or the
//! column set to improve, with probability `1 − |I₁| / (|I₁| + |I₂|)` for rows.
//! Candidates outside the chosen set are tried in ascending order of erasures over
//! the other set (lowest index first on ties); a candidate is accepted only if the
//! rank of the resulting complete restriction strictly exceeds the current rank.
//! The search stops after `stall_limit` consecutive iterations without a change,
//! then a greedy pass adds every row or column that keeps the restriction complete.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::masked::{MaskedMatrix, SubmatrixIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Consecutive iterations without an accepted change before stopping. At least 1.
    pub stall_limit: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { stall_limit: 100, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Rows,
    Cols,
}

/// Restriction seen from one side: `lines` are candidates to add, `cross` the fixed other set.
fn erasures_over(m: &MaskedMatrix, side: Side, line: usize, cross: &[usize]) -> usize {
    cross
        .iter()
        .filter(|&&o| match side {
            Side::Rows => m.get(line, o).is_none(),
            Side::Cols => m.get(o, line).is_none(),
        })
        .count()
}

fn line_complete(m: &MaskedMatrix, side: Side, line: usize, cross: &[usize]) -> bool {
    erasures_over(m, side, line, cross) == 0
}

fn rank_of(m: &MaskedMatrix, rows: &[usize], cols: &[usize]) -> usize {
    m.complete_part(rows, cols).map_or(0, |g| g.rank())
}

/// One improvement attempt on `side`. Returns the accepted `(rows, cols, rank)` if any.
fn improve(m: &MaskedMatrix, side: Side, cur: &SubmatrixIndex) -> Option<SubmatrixIndex> {
    let (own, cross, total) = match side {
        Side::Rows => (&cur.rows, &cur.cols, m.rows()),
        Side::Cols => (&cur.cols, &cur.rows, m.cols()),
    };
    let mut candidates: Vec<(usize, usize)> = (0..total)
        .filter(|i| own.binary_search(i).is_err())
        .map(|i| (erasures_over(m, side, i, cross), i))
        .collect();
    candidates.sort_unstable();

    let other = match side {
        Side::Rows => Side::Cols,
        Side::Cols => Side::Rows,
    };
    for (_, i) in candidates {
        let mut own2 = own.clone();
        let pos = own2.binary_search(&i).unwrap_err();
        own2.insert(pos, i);
        let cross2: Vec<usize> = cross.iter().copied().filter(|&o| line_complete(m, other, o, &own2)).collect();
        let (rows, cols) = match side {
            Side::Rows => (own2, cross2),
            Side::Cols => (cross2, own2),
        };
        let rank = rank_of(m, &rows, &cols);
        if rank > cur.rank {
            return Some(SubmatrixIndex { rows, cols, rank });
        }
    }
    None
}

/// Greedily adds rows, then columns, that keep `sub` complete, until nothing changes.
/// The rank is recomputed afterwards.
pub fn saturate(m: &MaskedMatrix, sub: &mut SubmatrixIndex) {
    loop {
        let mut changed = false;
        for i in 0..m.rows() {
            if sub.rows.binary_search(&i).is_err() && line_complete(m, Side::Rows, i, &sub.cols) {
                let pos = sub.rows.binary_search(&i).unwrap_err();
                sub.rows.insert(pos, i);
                changed = true;
            }
        }
        for j in 0..m.cols() {
            if sub.cols.binary_search(&j).is_err() && line_complete(m, Side::Cols, j, &sub.rows) {
                let pos = sub.cols.binary_search(&j).unwrap_err();
                sub.cols.insert(pos, j);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    sub.rank = rank_of(m, &sub.rows, &sub.cols);
}

/// Result of a search, with the sequence of accepted ranks for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTrace {
    pub result: SubmatrixIndex,
    pub accepted_ranks: Vec<usize>,
    pub iterations: usize,
}

pub fn find_max_complete_submatrix(m: &MaskedMatrix, cfg: &SearchConfig) -> SubmatrixIndex {
    find_max_complete_submatrix_traced(m, cfg).result
}

pub fn find_max_complete_submatrix_traced(m: &MaskedMatrix, cfg: &SearchConfig) -> SearchTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let stall_limit = cfg.stall_limit.max(1);
    let mut cur = SubmatrixIndex { rows: (0..m.rows()).collect(), cols: Vec::new(), rank: 0 };
    let mut accepted_ranks = Vec::new();
    let mut stall = 0;
    let mut iterations = 0;
    while stall < stall_limit {
        iterations += 1;
        let denom = cur.rows.len() + cur.cols.len();
        let th = if denom == 0 { 0.5 } else { cur.rows.len() as f64 / denom as f64 };
        let u: f64 = rng.random();
        let side = if u > th { Side::Rows } else { Side::Cols };
        match improve(m, side, &cur) {
            Some(next) => {
                accepted_ranks.push(next.rank);
                cur = next;
                stall = 0;
            }
            None => stall += 1,
        }
    }
    saturate(m, &mut cur);
    SearchTrace { result: cur, accepted_ranks, iterations }
}

/// Runs one search per seed on up to `threads` workers and keeps the best result:
/// highest rank, then largest `|I₁| + |I₂|`, then lowest seed.
pub fn find_best_over_seeds(m: &MaskedMatrix, stall_limit: usize, seeds: &[u64], threads: usize) -> Option<(u64, SubmatrixIndex)> {
    let run = |seed: u64| (seed, find_max_complete_submatrix(m, &SearchConfig { stall_limit, seed }));
    let results: Vec<(u64, SubmatrixIndex)> = if threads <= 1 || seeds.len() <= 1 {
        seeds.iter().map(|&s| run(s)).collect()
    } else {
        let chunk = seeds.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = seeds
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(|&s| run(s)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
        })
    };
    results.into_iter().max_by(|(sa, a), (sb, b)| {
        a.rank.cmp(&b.rank).then(a.size().cmp(&b.size())).then(sb.cmp(sa))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::linalg::GFMatrix;

    const EXAMPLE: &str = "1 X 0 0 X\nX 1 X X 0\n0 0 1 1 X\n0 0 X 1 X\nX X 0 0 1\n";

    fn example() -> MaskedMatrix {
        MaskedMatrix::parse(EXAMPLE, FieldSpec::GF2).unwrap()
    }

    fn is_maximal(m: &MaskedMatrix, s: &SubmatrixIndex) -> bool {
        let row_ok = (0..m.rows()).all(|i| s.rows.contains(&i) || !line_complete(m, Side::Rows, i, &s.cols));
        let col_ok = (0..m.cols()).all(|j| s.cols.contains(&j) || !line_complete(m, Side::Cols, j, &s.rows));
        row_ok && col_ok
    }

    #[test]
    fn example_reaches_rank_two_for_most_seeds() {
        let m = example();
        let hits = (0..10)
            .filter(|&seed| {
                let s = find_max_complete_submatrix(&m, &SearchConfig { stall_limit: 100, seed });
                assert!(s.is_valid_for(&m));
                assert!(is_maximal(&m, &s));
                s.rank == 2
            })
            .count();
        assert!(hits >= 9, "only {hits}/10 seeds reached rank 2");
    }

    #[test]
    fn complete_matrix_returns_everything() {
        let g = GFMatrix::from_slices(FieldSpec::GF2, &[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]]);
        let m = MaskedMatrix::from_gf(&g);
        let s = find_max_complete_submatrix(&m, &SearchConfig::default());
        assert_eq!(s.rows, vec![0, 1, 2]);
        assert_eq!(s.cols, vec![0, 1, 2]);
        assert_eq!(s.rank, g.rank());
    }

    #[test]
    fn all_erased_gives_rank_zero() {
        let m = MaskedMatrix::erased(FieldSpec::GF2, 3, 4);
        let s = find_max_complete_submatrix(&m, &SearchConfig::default());
        assert_eq!(s.rank, 0);
        assert!(s.cols.is_empty() || s.rows.is_empty());
    }

    #[test]
    fn accepted_ranks_strictly_increase() {
        let m = example();
        for seed in 0..20 {
            let t = find_max_complete_submatrix_traced(&m, &SearchConfig { stall_limit: 50, seed });
            assert!(t.accepted_ranks.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let m = example();
        let cfg = SearchConfig { stall_limit: 30, seed: 7 };
        assert_eq!(find_max_complete_submatrix_traced(&m, &cfg), find_max_complete_submatrix_traced(&m, &cfg));
    }

    #[test]
    fn best_over_seeds_is_thread_count_independent() {
        let m = example();
        let seeds: Vec<u64> = (0..8).collect();
        let a = find_best_over_seeds(&m, 20, &seeds, 1);
        let b = find_best_over_seeds(&m, 20, &seeds, 4);
        assert_eq!(a, b);
        assert_eq!(a.unwrap().1.rank, 2);
    }
}
