//! Prime-field arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime field GF(q) with 2 ≤ q ≤ 251. Elements are the residues `0..q` stored as `u8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    q: u8,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl FieldSpec {
    pub const GF2: FieldSpec = FieldSpec { q: 2 };

    pub fn new(q: u32) -> Result<Self> {
        if q > 251 || !is_prime(q) {
            return Err(Error::InvalidModulus(q));
        }
        Ok(FieldSpec { q: q as u8 })
    }

    #[inline]
    pub fn q(self) -> u8 {
        self.q
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.q == 2
    }

    /// Checks that `v` is a residue of this field.
    pub fn element(self, v: u64) -> Result<u8> {
        if v < self.q as u64 {
            Ok(v as u8)
        } else {
            Err(Error::NotInField { value: v, q: self.q })
        }
    }

    #[inline]
    pub fn add(self, x: u8, y: u8) -> u8 {
        ((x as u16 + y as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn sub(self, x: u8, y: u8) -> u8 {
        ((x as u16 + self.q as u16 - y as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn neg(self, x: u8) -> u8 {
        self.sub(0, x)
    }

    #[inline]
    pub fn mul(self, x: u8, y: u8) -> u8 {
        ((x as u16 * y as u16) % self.q as u16) as u8
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, x: u8) -> Result<u8> {
        if x.is_multiple_of(self.q) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.q as u32 - 2))
    }

    pub fn pow(self, mut base: u8, mut exp: u32) -> u8 {
        let mut acc = 1u8 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse table indexed by element; entry 0 is unused and set to 0.
    pub fn inverse_table(self) -> Vec<u8> {
        (0..self.q)
            .map(|x| if x == 0 { 0 } else { self.pow(x, self.q as u32 - 2) })
            .collect()
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(self, a: &[u8], b: &[u8]) -> u8 {
        let q = self.q as u32;
        let s = a.iter().zip(b).fold(0u32, |acc, (&x, &y)| (acc + x as u32 * y as u32) % q);
        s as u8
    }

    /// `q^d`, saturating at `u128::MAX`.
    pub fn count(self, d: usize) -> u128 {
        (self.q as u128).checked_pow(d as u32).unwrap_or(u128::MAX)
    }
}

impl TryFrom<u32> for FieldSpec {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        FieldSpec::new(q)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.q as u32
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}
