//! Word-packed GF(2) elimination. Rows are `u64` words, bit `j % 64` of word `j / 64` holds column `j`.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn from_fn(rows: usize, cols: usize, mut bit: impl FnMut(usize, usize) -> bool) -> Self {
        let words = cols.div_ceil(64).max(1);
        let mut data = vec![0u64; rows * words];
        for r in 0..rows {
            for c in 0..cols {
                if bit(r, c) {
                    data[r * words + c / 64] |= 1 << (c % 64);
                }
            }
        }
        BitMatrix { rows, cols, words, data }
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.words {
                self.data.swap(a * self.words + w, b * self.words + w);
            }
        }
    }

    fn xor_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.words {
            let v = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= v;
        }
    }

    /// Gauss-Jordan in place. Returns the pivot columns in ascending order.
    pub(crate) fn reduce(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, p);
            let start = if full { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub(crate) fn rank(mut self) -> usize {
        self.reduce(false).len()
    }

    pub(crate) fn bit(&self, r: usize, c: usize) -> bool {
        self.get(r, c)
    }
}

/// Incremental echelon basis over GF(2) for rows of at most 64 columns.
#[derive(Debug, Clone, Default)]
pub(crate) struct BitBasis {
    rows: Vec<(u64, u32)>,
}

impl BitBasis {
    /// Reduces `v` against the basis; returns `true` and appends it if independent.
    #[inline]
    pub(crate) fn insert(&mut self, mut v: u64) -> bool {
        for &(b, pivot) in &self.rows {
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        self.rows.push((v, v.trailing_zeros()));
        true
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub(crate) fn truncate(&mut self, len: usize) {
        self.rows.truncate(len);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_duplicates() {
        let id = BitMatrix::from_fn(70, 70, |r, c| r == c);
        assert_eq!(id.rank(), 70);
        let dup = BitMatrix::from_fn(4, 3, |_, c| c == 1);
        assert_eq!(dup.rank(), 1);
    }

    #[test]
    fn basis_insert_and_truncate() {
        let mut b = BitBasis::default();
        assert!(b.insert(0b011));
        assert!(b.insert(0b110));
        assert!(!b.insert(0b101));
        assert_eq!(b.len(), 2);
        b.truncate(1);
        assert!(b.insert(0b101));
    }
}
