//! Exhaustive minimum-rank completion for small instances.
//!
//! Completions are ordered lexicographically by the values at the erased positions
//! taken in row-major order, first position most significant. The witness is the
//! first completion of minimum rank in that order.
//!
//! The default mode walks rows depth-first and keeps an echelon basis of the rows
//! fixed so far, so the elimination of a shared prefix is done once; a subtree is
//! skipped when its prefix rank already reaches the best rank found. The reference
//! mode builds and ranks every completion from scratch.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::gf2::BitBasis;
use crate::linalg::GFMatrix;
use crate::masked::MaskedMatrix;

pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleMode {
    #[default]
    Incremental,
    /// Rank every completion independently; also counts optimal completions.
    Reference,
    /// Like `Reference`, but the first erased position varies fastest.
    ReferenceReversed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub min_rank: usize,
    pub witness: GFMatrix,
    /// Number of minimum-rank completions; only the reference modes count them.
    pub optimum_count: Option<u128>,
    /// Size of the completion space, `q^erasures`. Every completion is either
    /// ranked or excluded by the prefix-rank bound.
    pub enumerated: u128,
    /// Completions actually ranked.
    pub evaluated: u128,
}

pub fn oracle_min_rank(m: &MaskedMatrix, budget: u64) -> Result<OracleResult> {
    oracle_min_rank_with(m, budget, OracleMode::Incremental)
}

pub fn oracle_min_rank_with(m: &MaskedMatrix, budget: u64, mode: OracleMode) -> Result<OracleResult> {
    let f = m.field();
    let e = m.erasure_count();
    let required = f.count(e);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required: format!("{}^{} = {}", f.q(), e, required), budget });
    }
    match mode {
        OracleMode::Incremental => Ok(incremental(m, required)),
        OracleMode::Reference => Ok(reference(m, required, false)),
        OracleMode::ReferenceReversed => Ok(reference(m, required, true)),
    }
}

/// Odometer over `len` digits in `0..q`; `last_fastest` selects which end moves first.
fn advance(digits: &mut [u8], q: u8, last_fastest: bool) -> bool {
    let n = digits.len();
    for k in 0..n {
        let i = if last_fastest { n - 1 - k } else { k };
        digits[i] += 1;
        if digits[i] < q {
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn fill(m: &MaskedMatrix, positions: &[(usize, usize)], values: &[u8]) -> GFMatrix {
    let mut g = GFMatrix::from_fn(m.field(), m.rows(), m.cols(), |r, c| m.get(r, c).unwrap_or(0));
    for (&(r, c), &v) in positions.iter().zip(values) {
        g.set(r, c, v);
    }
    g
}

fn reference(m: &MaskedMatrix, space: u128, reversed: bool) -> OracleResult {
    let positions = m.erased_positions();
    let q = m.field().q();
    let mut digits = vec![0u8; positions.len()];
    let mut best: Option<(usize, Vec<u8>)> = None;
    let mut count = 0u128;
    let mut evaluated = 0u128;
    loop {
        let rank = fill(m, &positions, &digits).rank();
        evaluated += 1;
        match &best {
            Some((b, _)) if rank > *b => {}
            Some((b, _)) if rank == *b => count += 1,
            _ => {
                best = Some((rank, digits.clone()));
                count = 1;
            }
        }
        if !advance(&mut digits, q, !reversed) {
            break;
        }
    }
    let (min_rank, values) = best.expect("at least one completion");
    OracleResult {
        min_rank,
        witness: fill(m, &positions, &values),
        optimum_count: Some(count),
        enumerated: space,
        evaluated,
    }
}

trait Basis: Clone {
    type Row;
    fn insert(&mut self, row: Self::Row) -> bool;
    fn len(&self) -> usize;
    fn truncate(&mut self, len: usize);
}

impl Basis for BitBasis {
    type Row = u64;
    fn insert(&mut self, row: u64) -> bool {
        BitBasis::insert(self, row)
    }
    fn len(&self) -> usize {
        BitBasis::len(self)
    }
    fn truncate(&mut self, len: usize) {
        BitBasis::truncate(self, len)
    }
}

/// Echelon basis over GF(q) with normalized pivots.
#[derive(Clone)]
struct ByteBasis {
    field: FieldSpec,
    inv: Vec<u8>,
    rows: Vec<(Vec<u8>, usize)>,
}

impl Basis for ByteBasis {
    type Row = Vec<u8>;
    fn insert(&mut self, mut v: Vec<u8>) -> bool {
        let f = self.field;
        for (b, p) in &self.rows {
            let factor = v[*p];
            if factor != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(factor, *y));
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = self.inv[v[p] as usize];
        for x in v.iter_mut() {
            *x = f.mul(*x, s);
        }
        self.rows.push((v, p));
        true
    }
    fn len(&self) -> usize {
        self.rows.len()
    }
    fn truncate(&mut self, len: usize) {
        self.rows.truncate(len);
    }
}

struct Walk<'a, B: Basis> {
    m: &'a MaskedMatrix,
    row_erasures: Vec<Vec<usize>>,
    encode: &'a dyn Fn(&[u8]) -> B::Row,
    current: Vec<u8>,
    best: usize,
    best_values: Option<Vec<u8>>,
    evaluated: u128,
}

impl<B: Basis> Walk<'_, B> {
    fn visit(&mut self, row: usize, basis: &mut B) {
        if basis.len() >= self.best {
            return;
        }
        if row == self.m.rows() {
            self.evaluated += 1;
            self.best = basis.len();
            self.best_values = Some(self.current.clone());
            return;
        }
        let q = self.m.field().q();
        let cols = self.row_erasures[row].clone();
        let mut vals: Vec<u8> = (0..self.m.cols()).map(|c| self.m.get(row, c).unwrap_or(0)).collect();
        let mut digits = vec![0u8; cols.len()];
        let base = self.current.len();
        loop {
            for (&c, &d) in cols.iter().zip(&digits) {
                vals[c] = d;
            }
            self.current.extend_from_slice(&digits);
            let before = basis.len();
            basis.insert((self.encode)(&vals));
            self.visit(row + 1, basis);
            basis.truncate(before);
            self.current.truncate(base);
            if !advance(&mut digits, q, true) {
                break;
            }
        }
    }
}

fn incremental(m: &MaskedMatrix, space: u128) -> OracleResult {
    let row_erasures: Vec<Vec<usize>> = (0..m.rows())
        .map(|r| (0..m.cols()).filter(|&c| m.get(r, c).is_none()).collect())
        .collect();
    let ceiling = m.rows().min(m.cols()) + 1;
    let f = m.field();
    let (values, min_rank, evaluated) = if f.is_binary() && m.cols() <= 64 {
        let encode = |v: &[u8]| v.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        let mut walk = Walk::<BitBasis> {
            m,
            row_erasures,
            encode: &encode,
            current: Vec::new(),
            best: ceiling,
            best_values: None,
            evaluated: 0,
        };
        walk.visit(0, &mut BitBasis::default());
        (walk.best_values, walk.best, walk.evaluated)
    } else {
        let encode = |v: &[u8]| v.to_vec();
        let mut walk = Walk::<ByteBasis> {
            m,
            row_erasures,
            encode: &encode,
            current: Vec::new(),
            best: ceiling,
            best_values: None,
            evaluated: 0,
        };
        walk.visit(0, &mut ByteBasis { field: f, inv: f.inverse_table(), rows: Vec::new() });
        (walk.best_values, walk.best, walk.evaluated)
    };
    let values = values.expect("rank never exceeds min(a, b)");
    OracleResult {
        min_rank,
        witness: fill(m, &m.erased_positions(), &values),
        optimum_count: None,
        enumerated: space,
        evaluated,
    }
}
