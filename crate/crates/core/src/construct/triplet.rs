use super::{charpoly_dense, BitMatrix};
use crate::error::{Error, Result};
use crate::gf2poly::{is_primitive, Factorization};

/// Shift amounts and shape of a classic three-shift xorshift generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripletSpec {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub m: usize,
    pub n: usize,
}

fn shift_power(base: &BitMatrix, k: usize) -> BitMatrix {
    if k >= base.dim() {
        BitMatrix::zeros(base.dim())
    } else {
        base.pow(k as u64)
    }
}

/// Block companion matrix with `(I + L^a)(I + R^b)` acting on the oldest
/// stage and `I + R^c` on the newest.
pub fn build_marsaglia_matrix(t: &TripletSpec) -> Result<BitMatrix> {
    let TripletSpec { a, b, c, m, n } = *t;
    if m == 0 || n == 0 || a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidSpec(format!(
            "triplet requires positive a, b, c, m, n (got {t:?})"
        )));
    }
    let id = BitMatrix::identity(m);
    let left = id.add(&shift_power(&BitMatrix::left_shift(m), a))?;
    let right_b = id.add(&shift_power(&BitMatrix::right_shift(m), b))?;
    let oldest = left.mul(&right_b)?;
    let newest = id.add(&shift_power(&BitMatrix::right_shift(m), c))?;

    let mut tm = BitMatrix::zeros(m * n);
    for s in 0..n - 1 {
        tm.set_block(s * m, (s + 1) * m, &id);
    }
    let bottom = (n - 1) * m;
    if n == 1 {
        tm.set_block(0, 0, &oldest.add(&newest)?);
    } else {
        tm.set_block(bottom, 0, &oldest);
        tm.set_block(bottom, bottom, &newest);
    }
    Ok(tm)
}

/// Whether the triplet's matrix has a primitive characteristic polynomial.
pub fn check_triplet(t: &TripletSpec, factorization: &Factorization) -> Result<bool> {
    let d = t.m * t.n;
    if factorization.d() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: factorization.d(),
        });
    }
    let tm = build_marsaglia_matrix(t)?;
    let p = charpoly_dense(&tm)?;
    is_primitive(&p, factorization)
}
