//! Characteristic polynomial of a dense GF(2) matrix.
//!
//! Similarity-reduces the matrix to upper Hessenberg form with elementary
//! row/column operations and then expands `det(XI - H)` with the standard
//! Hessenberg recurrence. Nothing here relies on the block structure of a
//! companion matrix, which is what lets it serve as an oracle for it.

use super::BitMatrix;
use crate::error::{Error, Result};
use crate::gf2poly::{poly_add, poly_mul, Gf2Poly};

pub const DEFAULT_ORACLE_BOUND: usize = 64;

/// `det(XI - T)` for `T.dim() <= 64`.
pub fn charpoly_dense(t: &BitMatrix) -> Result<Gf2Poly> {
    charpoly_dense_bounded(t, DEFAULT_ORACLE_BOUND)
}

pub fn charpoly_dense_bounded(t: &BitMatrix, bound: usize) -> Result<Gf2Poly> {
    let dim = t.dim();
    if dim > bound {
        return Err(Error::OracleBound { dim, bound });
    }
    let h = hessenberg(t);

    // p[k] = charpoly of the leading k x k block.
    let mut p: Vec<Gf2Poly> = Vec::with_capacity(dim + 1);
    p.push(Gf2Poly::one());
    for k in 0..dim {
        let diag = if h.get(k, k) {
            Gf2Poly::one()
        } else {
            Gf2Poly::zero()
        };
        let mut next = poly_mul(&poly_add(&Gf2Poly::x(), &diag), &p[k]);
        // Walk upward along column k while the subdiagonal product stays 1.
        let mut chain = true;
        for i in (0..k).rev() {
            chain &= h.get(i + 1, i);
            if !chain {
                break;
            }
            if h.get(i, k) {
                next = poly_add(&next, &p[i]);
            }
        }
        p.push(next);
    }
    Ok(p.pop().expect("nonempty"))
}

fn hessenberg(t: &BitMatrix) -> BitMatrix {
    let dim = t.dim();
    let mut a = t.clone();
    for j in 0..dim.saturating_sub(2) {
        let Some(pivot) = (j + 1..dim).find(|&i| a.get(i, j)) else {
            continue;
        };
        // Permutation similarity brings the pivot to the subdiagonal.
        a.swap_rows(pivot, j + 1);
        a.swap_cols(pivot, j + 1);
        for k in j + 2..dim {
            if a.get(k, j) {
                // E = I + e_k e_{j+1}^T is its own inverse over GF(2).
                a.xor_row_into(j + 1, k);
                a.xor_col_into(k, j + 1);
            }
        }
    }
    a
}
