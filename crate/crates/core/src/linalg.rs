//! Dense linear algebra over a prime field: rank, reduced row echelon form,
//! nullspaces and affine solution sets of linear systems.
//!
//! Elimination always pivots on the first nonzero entry of the current column,
//! scanning rows from the lowest index. Binary matrices go through the
//! word-packed path in [`crate::gf2`]; other fields use one byte per entry and a
//! precomputed inverse table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::gf2::BitMatrix;

/// A dense row-major matrix over GF(q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GFMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl GFMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        GFMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors. Every row must have length `cols`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension { expected: cols, got: row.len() });
            }
            for &v in row {
                data.push(field.element(v as u64)?);
            }
        }
        Ok(GFMatrix { field, rows: rows.len(), cols, data })
    }

    /// Convenience constructor for literals; panics on malformed input.
    pub fn from_slices(field: FieldSpec, rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(field, cols, &owned).expect("well-formed matrix literal")
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % field.q());
            }
        }
        GFMatrix { field, rows, cols, data }
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
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.field.q();
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.field, rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]))
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows).map(|r| self.field.dot(self.row(r), v)).collect()
    }

    pub fn mul(&self, other: &GFMatrix) -> Result<GFMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, got: other.rows });
        }
        let t = other.transpose();
        Ok(Self::from_fn(self.field, self.rows, other.cols, |r, c| self.field.dot(self.row(r), t.row(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn to_bits(&self) -> BitMatrix {
        BitMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) == 1)
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.field.is_binary() {
            self.to_bits().rank()
        } else {
            let mut m = self.clone();
            m.eliminate(false).len()
        }
    }

    /// Rank through byte-per-entry elimination regardless of the field.
    /// Kept public so the packed binary path can be cross-checked.
    pub fn rank_bytewise(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Reduced row echelon form and its pivot columns (ascending, 0-based).
    pub fn rref(&self) -> (GFMatrix, Vec<usize>) {
        if self.field.is_binary() {
            let mut bits = self.to_bits();
            let pivots = bits.reduce(true);
            let out = Self::from_fn(self.field, self.rows, self.cols, |r, c| bits.bit(r, c) as u8);
            (out, pivots)
        } else {
            self.rref_bytewise()
        }
    }

    pub fn rref_bytewise(&self) -> (GFMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    /// In-place elimination. With `full` the result is the RREF, otherwise a row echelon form.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let f = self.field;
        let inv = f.inverse_table();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if p != rank {
                for k in 0..cols {
                    self.data.swap(p * cols + k, rank * cols + k);
                }
            }
            let s = inv[self.get(rank, c) as usize];
            if s != 1 {
                for k in c..cols {
                    let v = self.get(rank, k);
                    self.data[rank * cols + k] = f.mul(v, s);
                }
            }
            let start = if full { 0 } else { rank + 1 };
            for r in start..self.rows {
                let factor = self.get(r, c);
                if r == rank || factor == 0 {
                    continue;
                }
                for k in c..cols {
                    let pv = self.get(rank, k);
                    if pv != 0 {
                        let v = self.get(r, k);
                        self.data[r * cols + k] = f.sub(v, f.mul(factor, pv));
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> GFMatrix {
        let (r, pivots) = self.rref();
        r.select(&(0..pivots.len()).collect::<Vec<_>>(), &(0..self.cols).collect::<Vec<_>>())
    }

    /// True when both matrices have the same number of columns and span the same row space.
    pub fn same_row_space(&self, other: &GFMatrix) -> bool {
        self.field == other.field && self.cols == other.cols && self.row_space_basis() == other.row_space_basis()
    }

    /// A basis of the right nullspace `{ v : self · vᵀ = 0 }`; `cols − rank` vectors.
    pub fn nullspace_basis(&self) -> Vec<Vec<u8>> {
        self.solve(&vec![0; self.rows]).expect("dimensions agree").basis
    }

    /// The full affine solution set of `self · x = b`.
    pub fn solve(&self, b: &[u8]) -> Result<AffineSolutionSet> {
        if b.len() != self.rows {
            return Err(Error::Dimension { expected: self.rows, got: b.len() });
        }
        let f = self.field;
        let n = self.cols;
        let aug = Self::from_fn(f, self.rows, n + 1, |r, c| if c < n { self.get(r, c) } else { b[r] });
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&n) {
            return Ok(AffineSolutionSet::empty(f, n));
        }
        let mut particular = vec![0u8; n];
        for (r, &p) in pivots.iter().enumerate() {
            particular[p] = red.get(r, n);
        }
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let basis = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0u8; n];
                v[fc] = 1;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(red.get(r, fc));
                }
                v
            })
            .collect();
        Ok(AffineSolutionSet { field: f, unknowns: n, particular: Some(particular), basis })
    }
}

impl fmt::Display for GFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// The solutions of a linear system: `particular + span(basis)`, or nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutionSet {
    pub field: FieldSpec,
    pub unknowns: usize,
    pub particular: Option<Vec<u8>>,
    pub basis: Vec<Vec<u8>>,
}

impl AffineSolutionSet {
    pub fn empty(field: FieldSpec, unknowns: usize) -> Self {
        AffineSolutionSet { field, unknowns, particular: None, basis: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// Number of free variables, or `None` when the system is inconsistent.
    pub fn dimension(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.basis.len())
    }

    /// `q^d`, or 0 when inconsistent. Saturates at `u128::MAX`.
    pub fn count(&self) -> u128 {
        match self.dimension() {
            None => 0,
            Some(d) => self.field.count(d),
        }
    }

    /// Enumerates every solution. Free-variable coefficients advance in odometer
    /// order with the first basis vector fastest.
    pub fn iter(&self) -> SolutionIter<'_> {
        SolutionIter {
            set: self,
            coeffs: vec![0; self.basis.len()],
            done: self.particular.is_none(),
        }
    }
}

pub struct SolutionIter<'a> {
    set: &'a AffineSolutionSet,
    coeffs: Vec<u8>,
    done: bool,
}

impl Iterator for SolutionIter<'_> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let f = self.set.field;
        let mut x = self.set.particular.clone().expect("nonempty set");
        for (c, b) in self.coeffs.iter().zip(&self.set.basis) {
            if *c != 0 {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi = f.add(*xi, f.mul(*c, *bi));
                }
            }
        }
        self.done = true;
        for c in self.coeffs.iter_mut() {
            *c += 1;
            if *c < f.q() {
                self.done = false;
                break;
            }
            *c = 0;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        let all_ones = GFMatrix::from_slices(
            f,
            &[&[1, 1, 0, 0, 1], &[1, 1, 1, 1, 0], &[0, 0, 1, 1, 1], &[0, 0, 1, 1, 1], &[1, 1, 0, 0, 1]],
        );
        assert_eq!(all_ones.rank(), 2);
        assert_eq!(GFMatrix::identity(f, 4).rank(), 4);
        assert_eq!(GFMatrix::zeros(gf(3), 3, 5).rank(), 0);
        assert_eq!(GFMatrix::zeros(f, 0, 5).rank(), 0);
    }

    #[test]
    fn rref_examples() {
        let f = gf(2);
        let (r, p) = GFMatrix::from_slices(f, &[&[0, 1], &[1, 0]]).rref();
        assert_eq!(r, GFMatrix::identity(f, 2));
        assert_eq!(p, vec![0, 1]);

        let g = GFMatrix::from_slices(f, &[&[1, 1, 0, 0, 1], &[0, 0, 1, 1, 1]]);
        let (r, p) = g.rref();
        assert_eq!(r, g);
        assert_eq!(p, vec![0, 2]);

        let f5 = gf(5);
        let (r, p) = GFMatrix::from_slices(f5, &[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r, GFMatrix::from_slices(f5, &[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn nullspace_examples() {
        let f = gf(2);
        let g = GFMatrix::from_slices(f, &[&[1, 1, 0, 0, 1], &[0, 0, 1, 1, 1]]);
        let ns = GFMatrix::from_rows(f, 5, &g.nullspace_basis()).unwrap();
        let expected = GFMatrix::from_slices(f, &[&[1, 1, 0, 0, 0], &[0, 0, 1, 1, 0], &[1, 0, 1, 0, 1]]);
        assert!(ns.same_row_space(&expected));

        assert!(GFMatrix::identity(gf(3), 4).nullspace_basis().is_empty());
        assert_eq!(GFMatrix::zeros(f, 1, 3).nullspace_basis().len(), 3);
    }

    #[test]
    fn solve_examples() {
        let f = gf(2);
        let s = GFMatrix::identity(f, 2).solve(&[1, 0]).unwrap();
        assert_eq!(s.particular, Some(vec![1, 0]));
        assert_eq!(s.dimension(), Some(0));

        let s = GFMatrix::from_slices(f, &[&[1, 1]]).solve(&[1]).unwrap();
        assert_eq!(s.particular, Some(vec![1, 0]));
        assert_eq!(s.dimension(), Some(1));
        assert_eq!(s.count(), 2);
        let all: Vec<_> = s.iter().collect();
        assert_eq!(all, vec![vec![1, 0], vec![0, 1]]);

        let s = GFMatrix::from_slices(f, &[&[1, 1], &[1, 1]]).solve(&[0, 1]).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.count(), 0);
        assert_eq!(s.iter().count(), 0);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = GFMatrix::identity(gf(2), 2);
        assert!(matches!(m.solve(&[1]), Err(Error::Dimension { expected: 2, got: 1 })));
    }

    #[test]
    fn from_rows_rejects_values_outside_field() {
        assert!(GFMatrix::from_rows(gf(3), 2, &[vec![0, 3]]).is_err());
        assert!(GFMatrix::from_rows(gf(3), 2, &[vec![0]]).is_err());
    }

    #[test]
    fn matrix_product() {
        let f = gf(5);
        let a = GFMatrix::from_slices(f, &[&[1, 2], &[3, 4]]);
        let b = GFMatrix::identity(f, 2);
        assert_eq!(a.mul(&b).unwrap(), a);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, GFMatrix::from_slices(f, &[&[2, 0], &[0, 2]]));
    }
}
