//! Packed linear algebra over GF(2).
//!
//! Bit strings follow ket-label order: qubit 0 is the most significant bit
//! of the packed word, so `BitVector::new(3, 0b100)` is `|100⟩` with qubit 0
//! set. Matrix rows use the same packing, so column `b` of row `a` lives at
//! bit `n - 1 - b`.

use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest bit-string length supported by the packed representation.
pub const MAX_BITS: usize = 63;

#[inline]
pub(crate) fn qubit_mask(n: usize, q: usize) -> u64 {
    1u64 << (n - 1 - q)
}

#[inline]
pub(crate) fn parity(x: u64) -> u32 {
    x.count_ones() & 1
}

/// An n-bit string, qubit 0 first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    n: usize,
    bits: u64,
}

impl BitVector {
    pub fn new(n: usize, bits: u64) -> Self {
        assert!(n <= MAX_BITS, "bit vector too long");
        assert!(n == 64 || bits >> n == 0, "value {bits} does not fit in {n} bits");
        Self { n, bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(n, 0)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Packed value; also the index of `|self⟩` in a statevector.
    pub fn value(&self) -> u64 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn get(&self, q: usize) -> bool {
        self.bits & qubit_mask(self.n, q) != 0
    }

    pub fn set(&mut self, q: usize, v: bool) {
        let m = qubit_mask(self.n, q);
        if v {
            self.bits |= m;
        } else {
            self.bits &= !m;
        }
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.n, other.n);
        parity(self.bits & other.bits) == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }
}

impl BitXor for BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        BitVector { n: self.n, bits: self.bits ^ rhs.bits }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            f.write_str(if self.get(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > MAX_BITS {
            return Err(Error::Parse(format!("bitstring of length {}", s.len())));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::Parse(format!("invalid bit {c:?} in {s:?}"))),
            }
        }
        Ok(BitVector { n: s.len(), bits })
    }
}

/// Square n×n matrix over GF(2), one packed word per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_BITS);
        Self { n, rows: vec![0; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for a in 0..n {
            m.rows[a] = qubit_mask(n, a);
        }
        m
    }

    pub fn from_rows(n: usize, rows: Vec<u64>) -> Self {
        assert_eq!(rows.len(), n);
        assert!(rows.iter().all(|r| n == 64 || r >> n == 0));
        Self { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, a: usize) -> u64 {
        self.rows[a]
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.rows[a] & qubit_mask(self.n, b) != 0
    }

    pub fn set(&mut self, a: usize, b: usize, v: bool) {
        let m = qubit_mask(self.n, b);
        if v {
            self.rows[a] |= m;
        } else {
            self.rows[a] &= !m;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                if self.get(a, b) {
                    t.set(b, a, true);
                }
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Matrix-vector product `M·v` over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        debug_assert_eq!(v.len(), self.n);
        let mut out = 0u64;
        for (a, &row) in self.rows.iter().enumerate() {
            if parity(row & v.value()) == 1 {
                out |= qubit_mask(self.n, a);
            }
        }
        BitVector::new(self.n, out)
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::zeros(self.n);
        for a in 0..self.n {
            let mut acc = 0u64;
            for b in 0..self.n {
                if self.get(a, b) {
                    acc ^= other.rows[b];
                }
            }
            out.rows[a] = acc;
        }
        out
    }

    /// Rank by Gaussian elimination on a copy of the rows.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for bit in (0..self.n).rev() {
            let pivot = 1u64 << bit;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & pivot != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pr = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & pivot != 0 {
                    *r ^= pr;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Number of set entries strictly above the diagonal.
    pub fn upper_weight(&self) -> usize {
        (0..self.n)
            .map(|a| {
                let above = if a + 1 >= self.n { 0 } else { (1u64 << (self.n - 1 - a)) - 1 };
                (self.rows[a] & above).count_ones() as usize
            })
            .sum()
    }

    pub fn diagonal(&self) -> Vec<bool> {
        (0..self.n).map(|a| self.get(a, a)).collect()
    }
}

impl BitXor for &BitMatrix {
    type Output = BitMatrix;

    fn bitxor(self, rhs: Self) -> BitMatrix {
        assert_eq!(self.n, rhs.n);
        BitMatrix {
            n: self.n,
            rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a ^ b).collect(),
        }
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.n {
            for b in 0..self.n {
                f.write_str(if self.get(a, b) { "1" } else { "0" })?;
            }
            if a + 1 < self.n {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}
