//! Completing an erased line as a codeword of the code spanned by a complete sub-matrix.
//!
//! The generator is the nonzero part of the sub-matrix's RREF. With pivot columns
//! moved to the front it reads `[I | P]`, so the parity-check matrix is `[−Pᵀ | I]`
//! with the column permutation undone. An incomplete line is then a received word
//! with erasures: only the erased positions are unknowns and the parity checks give
//! `H_E · x_E = −H_K · x_K`.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{AffineSolutionSet, GFMatrix};
use crate::masked::Entry;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    /// `k × m`, full row rank, in RREF.
    pub generator: GFMatrix,
    /// `(m − k) × m`, full row rank, `generator · parityᵀ = 0`.
    pub parity: GFMatrix,
    pub pivot_cols: Vec<usize>,
}

impl LinearCode {
    /// Builds the code spanned by the rows of a complete matrix.
    pub fn from_complete(sub: &GFMatrix) -> Self {
        let f = sub.field();
        let m = sub.cols();
        let (red, pivots) = sub.rref();
        let k = pivots.len();
        let generator = red.select(&(0..k).collect::<Vec<_>>(), &(0..m).collect::<Vec<_>>());

        let mut is_pivot = vec![false; m];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..m).filter(|&c| !is_pivot[c]).collect();
        let mut parity = GFMatrix::zeros(f, free.len(), m);
        for (j, &fc) in free.iter().enumerate() {
            parity.set(j, fc, 1);
            for (i, &p) in pivots.iter().enumerate() {
                parity.set(j, p, f.neg(generator.get(i, fc)));
            }
        }
        LinearCode { generator, parity, pivot_cols: pivots }
    }

    pub fn field(&self) -> FieldSpec {
        self.generator.field()
    }

    /// Code length.
    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        word.len() == self.len() && self.parity.mul_vec(word).iter().all(|&s| s == 0)
    }

    /// Solves for the erased positions of `partial` so that it becomes a codeword.
    pub fn project(&self, partial: &[Entry]) -> Result<ProjectionOutcome> {
        if partial.len() != self.len() {
            return Err(Error::Dimension { expected: self.len(), got: partial.len() });
        }
        let f = self.field();
        let erased: Vec<usize> = (0..partial.len()).filter(|&i| partial[i].is_none()).collect();
        let h = &self.parity;
        let rhs: Vec<u8> = (0..h.rows())
            .map(|r| {
                let known = partial
                    .iter()
                    .enumerate()
                    .filter_map(|(c, e)| e.map(|v| f.mul(h.get(r, c), v)))
                    .fold(0, |acc, x| f.add(acc, x));
                f.neg(known)
            })
            .collect();
        let all_rows: Vec<usize> = (0..h.rows()).collect();
        let solutions = h.select(&all_rows, &erased).solve(&rhs)?;
        Ok(ProjectionOutcome { partial: partial.to_vec(), erased, solutions })
    }
}

/// Every way of completing one line inside the code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionOutcome {
    pub partial: Vec<Entry>,
    /// Erased positions, ascending; the unknowns of `solutions`.
    pub erased: Vec<usize>,
    pub solutions: AffineSolutionSet,
}

impl ProjectionOutcome {
    /// `q^d`, or 0 if the line cannot be completed inside the code.
    pub fn solution_count(&self) -> u128 {
        self.solutions.count()
    }

    pub fn is_infeasible(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn is_unique(&self) -> bool {
        self.solutions.dimension() == Some(0)
    }

    fn fill(&self, values: &[u8]) -> Vec<u8> {
        let mut out: Vec<u8> = self.partial.iter().map(|e| e.unwrap_or(0)).collect();
        for (&pos, &v) in self.erased.iter().zip(values) {
            out[pos] = v;
        }
        out
    }

    /// Values for the erased positions of each completion, in enumeration order.
    pub fn fillings(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.solutions.iter()
    }

    /// Full completed vectors, in enumeration order.
    pub fn candidates(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.solutions.iter().map(|x| self.fill(&x))
    }
}
