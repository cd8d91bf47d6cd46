use std::fmt;

use crate::error::{Error, Result};

/// Dense square matrix over GF(2). Row `r` is a bit vector with column `c`
/// at bit `c % 64` of word `c / 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    dim: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(dim: usize) -> Self {
        let stride = dim.div_ceil(64).max(1);
        BitMatrix {
            dim,
            stride,
            data: vec![0; dim * stride],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    /// The right-shift operator `R`: ones on the subdiagonal, so
    /// `R (x_1, ..., x_m) = (0, x_1, ..., x_{m-1})`.
    pub fn right_shift(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 1..dim {
            m.set(i, i - 1, true);
        }
        m
    }

    /// The left-shift operator `L`, the transpose of `R`.
    pub fn left_shift(dim: usize) -> Self {
        Self::right_shift(dim).transpose()
    }

    /// Parses rows written as strings of `0`/`1`, leftmost character is
    /// column 0.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for (c, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    _ => return Err(Error::Parse(format!("bad matrix entry `{ch}`"))),
                }
            }
        }
        Ok(m)
    }

    pub fn to_rows(&self) -> Vec<String> {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| if self.get(r, c) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.stride + c / 64];
        let bit = 1u64 << (c % 64);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`.
    pub(crate) fn xor_row_into(&mut self, src: usize, dst: usize) {
        for k in 0..self.stride {
            let v = self.data[src * self.stride + k];
            self.data[dst * self.stride + k] ^= v;
        }
    }

    /// `col[dst] ^= col[src]`.
    pub(crate) fn xor_col_into(&mut self, src: usize, dst: usize) {
        for r in 0..self.dim {
            if self.get(r, src) {
                let v = self.get(r, dst);
                self.set(r, dst, !v);
            }
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.dim {
            let (x, y) = (self.get(r, a), self.get(r, b));
            self.set(r, a, y);
            self.set(r, b, x);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.check_dim(other.dim)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitMatrix {
            dim: self.dim,
            stride: self.stride,
            data,
        })
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.check_dim(other.dim)?;
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for k in 0..self.dim {
                if self.get(r, k) {
                    for w in 0..self.stride {
                        out.data[r * self.stride + w] ^= other.data[k * self.stride + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> BitMatrix {
        let mut acc = Self::identity(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            base = base.mul(&base).expect("same dimension");
            e >>= 1;
        }
        acc
    }

    /// `y = A x` for a bit vector packed like a row.
    pub fn mul_vec(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.stride {
            return Err(Error::DimensionMismatch {
                expected: self.stride,
                found: x.len(),
            });
        }
        let mut y = vec![0u64; self.stride];
        for r in 0..self.dim {
            let parity = self
                .row(r)
                .iter()
                .zip(x)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                y[r / 64] |= 1u64 << (r % 64);
            }
        }
        Ok(y)
    }

    /// Copies `block` into the square region starting at (`row0`, `col0`).
    pub fn set_block(&mut self, row0: usize, col0: usize, block: &BitMatrix) {
        for r in 0..block.dim {
            for c in 0..block.dim {
                self.set(row0 + r, col0 + c, block.get(r, c));
            }
        }
    }

    pub fn block(&self, row0: usize, col0: usize, size: usize) -> BitMatrix {
        let mut b = Self::zeros(size);
        for r in 0..size {
            for c in 0..size {
                b.set(r, c, self.get(row0 + r, col0 + c));
            }
        }
        b
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if other != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.dim)?;
        for row in self.to_rows() {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_matrices() {
        let r = BitMatrix::right_shift(3);
        assert_eq!(r.to_rows(), ["000", "100", "010"]);
        assert_eq!(BitMatrix::left_shift(3).to_rows(), ["010", "001", "000"]);
        assert_eq!(r.pow(3), BitMatrix::zeros(3));
    }

    #[test]
    fn mul_vec_and_mul_agree_on_wide_matrices() {
        let mut a = BitMatrix::zeros(70);
        for i in 0..70 {
            a.set(i, (i * 7 + 3) % 70, true);
            a.set(i, (i * 11 + 1) % 70, true);
        }
        let b = a.mul(&a).unwrap();
        let x = vec![0xdead_beef_1234_5678u64, 0x2a];
        assert_eq!(
            b.mul_vec(&x).unwrap(),
            a.mul_vec(&a.mul_vec(&x).unwrap()).unwrap()
        );
    }

    #[test]
    fn row_string_round_trip() {
        let rows = ["0010", "0001", "0101", "1000"];
        let m = BitMatrix::from_rows(&rows).unwrap();
        assert_eq!(m.to_rows(), rows);
        assert!(BitMatrix::from_rows(&["01", "1"]).is_err());
    }
}
