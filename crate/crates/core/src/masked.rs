//! Partially erased matrices: every entry is either a field element or erased.
//!
//! Text format, one row per line:
//!
//! ```text
//! # comment
//! 1 X 0 0 X
//! X 1 X X 0
//! ```
//!
//! Tokens are separated by spaces or tabs; a token is a decimal residue below q
//! or the literal `X`. Blank lines are ignored.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::GFMatrix;

/// A single entry: `Some(value)` when known, `None` when erased.
pub type Entry = Option<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaskedMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
}

impl MaskedMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Entry>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, got: entries.len() });
        }
        for v in entries.iter().flatten() {
            field.element(*v as u64)?;
        }
        Ok(MaskedMatrix { field, rows, cols, entries })
    }

    pub fn erased(field: FieldSpec, rows: usize, cols: usize) -> Self {
        MaskedMatrix { field, rows, cols, entries: vec![None; rows * cols] }
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Entry) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c).map(|v| v % field.q()));
            }
        }
        MaskedMatrix { field, rows, cols, entries }
    }

    /// Parses the text matrix format. Row lengths must agree.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Self> {
        let mut cols = None;
        let mut entries = Vec::new();
        let mut rows = 0;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut count = 0;
            for tok in trimmed.split([' ', '\t']).filter(|t| !t.is_empty()) {
                let entry = if tok == "X" {
                    None
                } else {
                    let v: u64 = tok.parse().map_err(|_| Error::Format {
                        line: lineno,
                        msg: format!("invalid token {tok:?}"),
                    })?;
                    Some(field.element(v)?)
                };
                entries.push(entry);
                count += 1;
            }
            match cols {
                None => cols = Some(count),
                Some(c) if c != count => {
                    return Err(Error::Format {
                        line: lineno,
                        msg: format!("row has {count} entries, expected {c}"),
                    })
                }
                _ => {}
            }
            rows += 1;
        }
        let cols = cols.ok_or(Error::Format { line: 0, msg: "empty matrix".into() })?;
        Ok(MaskedMatrix { field, rows, cols, entries })
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Entry {
        self.entries[r * self.cols + c]
    }

    /// Fills (or re-erases) one entry.
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Entry) {
        self.entries[r * self.cols + c] = v.map(|x| x % self.field.q());
    }

    pub fn row(&self, r: usize) -> &[Entry] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn erasure_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_none()).count()
    }

    pub fn known_count(&self) -> usize {
        self.entries.len() - self.erasure_count()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// Erased positions `(row, col)` in row-major order.
    pub fn erased_positions(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| self.get(r, c).is_none())
            .collect()
    }

    /// Per-row and per-column erasure counts.
    pub fn erasure_profile(&self) -> (Vec<usize>, Vec<usize>) {
        let mut rows = vec![0; self.rows];
        let mut cols = vec![0; self.cols];
        for (r, c) in self.erased_positions() {
            rows[r] += 1;
            cols[c] += 1;
        }
        (rows, cols)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Restriction to `rows × cols`, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &r in rows {
            if r >= self.rows {
                return Err(Error::OutOfBounds { index: r, len: self.rows });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(Error::OutOfBounds { index: c, len: self.cols });
            }
        }
        Ok(Self::from_fn(self.field, rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c])))
    }

    /// True when every entry of `rows × cols` is known.
    pub fn is_complete_on(&self, rows: &[usize], cols: &[usize]) -> bool {
        rows.iter().all(|&r| cols.iter().all(|&c| self.get(r, c).is_some()))
    }

    /// The known matrix on `rows × cols`, or `None` if any entry there is erased.
    pub fn complete_part(&self, rows: &[usize], cols: &[usize]) -> Option<GFMatrix> {
        if !self.is_complete_on(rows, cols) {
            return None;
        }
        Some(GFMatrix::from_fn(self.field, rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).expect("checked complete")
        }))
    }

    /// Converts a matrix without erasures.
    pub fn to_gf(&self) -> Option<GFMatrix> {
        let all_r: Vec<usize> = (0..self.rows).collect();
        let all_c: Vec<usize> = (0..self.cols).collect();
        self.complete_part(&all_r, &all_c)
    }

    pub fn from_gf(m: &GFMatrix) -> Self {
        Self::from_fn(m.field(), m.rows(), m.cols(), |r, c| Some(m.get(r, c)))
    }

    /// Checks that `completed` agrees with every known entry.
    pub fn check_agrees(&self, completed: &GFMatrix) -> Result<()> {
        if completed.rows() != self.rows || completed.cols() != self.cols {
            return Err(Error::Dimension { expected: self.rows * self.cols, got: completed.rows() * completed.cols() });
        }
        if completed.field() != self.field {
            return Err(Error::FieldMismatch { left: self.field.q(), right: completed.field().q() });
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Some(v) = self.get(r, c) {
                    if completed.get(r, c) != v {
                        return Err(Error::MaskDisagreement { row: r, col: c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Vector extension to block length `n`: `1` becomes an `n×n` identity block,
    /// `0` a zero block and an erasure an all-erased block.
    pub fn blow_up(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Semantic("block length must be at least 1".into()));
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Some(v) = self.get(r, c) {
                    if v > 1 {
                        return Err(Error::NotAPattern { row: r, col: c, value: v });
                    }
                }
            }
        }
        Ok(Self::from_fn(self.field, self.rows * n, self.cols * n, |r, c| {
            self.get(r / n, c / n).map(|v| if r % n == c % n { v } else { 0 })
        }))
    }
}

/// Block-diagonal lift of a scalar completion: entry `v` becomes `v · I_n`.
/// Applied to a completion of a pattern, it yields a completion of the pattern's
/// blow-up with rank `n · rank`.
pub fn lift_completion(m: &GFMatrix, n: usize) -> GFMatrix {
    GFMatrix::from_fn(m.field(), m.rows() * n, m.cols() * n, |r, c| {
        if r % n == c % n {
            m.get(r / n, c / n)
        } else {
            0
        }
    })
}

impl fmt::Display for MaskedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let toks: Vec<String> = self
                .row(r)
                .iter()
                .map(|e| match e {
                    Some(v) => v.to_string(),
                    None => "X".to_string(),
                })
                .collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

/// A complete sub-matrix `M(rows, cols)` and its rank. Index sets are sorted, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SubmatrixIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub rank: usize,
}

impl SubmatrixIndex {
    /// Builds the index for `rows × cols` of `m`, computing the rank.
    /// Returns `None` if the restriction contains an erasure.
    pub fn of(m: &MaskedMatrix, mut rows: Vec<usize>, mut cols: Vec<usize>) -> Option<Self> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        let rank = m.complete_part(&rows, &cols)?.rank();
        Some(SubmatrixIndex { rows, cols, rank })
    }

    /// True when the restriction is complete and `rank` matches a fresh computation.
    pub fn is_valid_for(&self, m: &MaskedMatrix) -> bool {
        m.complete_part(&self.rows, &self.cols).is_some_and(|g| g.rank() == self.rank)
    }

    pub fn size(&self) -> usize {
        self.rows.len() + self.cols.len()
    }
}
