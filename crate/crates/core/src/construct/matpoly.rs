use super::XorshiftSpec;
use crate::error::{Error, Result};
use crate::gf2poly::{poly_add, Gf2Poly};

/// The `m x m` matrix polynomial `I X^n - C_{n-1} X^{n-1} - ... - C_0`.
///
/// Entries are stored row-major. Its shape is fixed: `X^n` on the diagonal
/// of the first `m - 1` columns, `1` on the subdiagonal, and the chunk
/// polynomials `f_0 .. f_{m-1}` (plus `X^n` in the corner) in the last
/// column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPolynomial {
    m: usize,
    n: usize,
    entries: Vec<Gf2Poly>,
}

impl MatrixPolynomial {
    /// Builds from explicit entries; no shape check is done until
    /// [`det_matrix_polynomial`].
    pub fn from_entries(m: usize, n: usize, entries: Vec<Gf2Poly>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                found: entries.len(),
            });
        }
        Ok(MatrixPolynomial { m, n, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Gf2Poly {
        &self.entries[r * self.m + c]
    }

    fn skeleton(m: usize, n: usize, last_column: Vec<Gf2Poly>) -> Self {
        let mut entries = vec![Gf2Poly::zero(); m * m];
        for r in 0..m {
            for c in 0..m - 1 {
                if r == c {
                    entries[r * m + c] = Gf2Poly::monomial(n);
                } else if r == c + 1 {
                    entries[r * m + c] = Gf2Poly::one();
                }
            }
        }
        for (r, p) in last_column.into_iter().enumerate() {
            entries[r * m + m - 1] = p;
        }
        MatrixPolynomial { m, n, entries }
    }

    /// Rebuilds `M(X)` from tap vectors: row `j` of the last column collects
    /// component `j` of every `v_i` as the coefficient of `X^i`.
    pub fn from_spec(spec: &XorshiftSpec) -> Self {
        let (m, n) = (spec.m(), spec.n());
        let mut column: Vec<Gf2Poly> = (0..m)
            .map(|j| {
                let mut p = Gf2Poly::zero();
                for (i, &v) in spec.taps().iter().enumerate() {
                    if (v >> (m - 1 - j)) & 1 == 1 {
                        p.set_coeff(i, true);
                    }
                }
                p
            })
            .collect();
        column[m - 1] = poly_add(&column[m - 1], &Gf2Poly::monomial(n));
        Self::skeleton(m, n, column)
    }
}

/// `M(X)` for `f` split into `m` consecutive coefficient chunks of width
/// `n = deg(f) / m`.
pub fn build_matrix_polynomial(f: &Gf2Poly, m: usize) -> Result<MatrixPolynomial> {
    let degree = f.degree();
    if m == 0 || f.is_zero() || degree == 0 || !degree.is_multiple_of(m) {
        return Err(Error::WordSizeDoesNotDivide { m, degree });
    }
    let n = degree / m;
    let mut column: Vec<Gf2Poly> = (0..m).map(|i| f.chunk(i, n)).collect();
    // f_m = a_{mn} = 1 rides along in the corner.
    column[m - 1] = poly_add(&column[m - 1], &Gf2Poly::monomial(n));
    Ok(MatrixPolynomial::skeleton(m, n, column))
}

/// Determinant by eliminating the diagonal `X^n` terms from the bottom row
/// upward, which leaves the nested form
/// `g_0 = f_0 + X^n (f_1 + X^n (... + X^n (f_{m-1} + X^n)))`.
pub fn det_matrix_polynomial(mp: &MatrixPolynomial) -> Result<Gf2Poly> {
    let (m, n) = (mp.m, mp.n);
    if m == 0 || n == 0 {
        return Err(Error::MalformedMatrixPolynomial("empty shape".into()));
    }
    let xn = Gf2Poly::monomial(n);
    for r in 0..m {
        for c in 0..m - 1 {
            let expected = if r == c {
                xn.clone()
            } else if r == c + 1 {
                Gf2Poly::one()
            } else {
                Gf2Poly::zero()
            };
            if *mp.get(r, c) != expected {
                return Err(Error::MalformedMatrixPolynomial(format!(
                    "entry ({r}, {c}) is {}, expected {expected}",
                    mp.get(r, c)
                )));
            }
        }
        let last = mp.get(r, m - 1);
        let ok = if r == m - 1 {
            !last.is_zero() && last.degree() == n
        } else {
            last.is_zero() || last.degree() < n
        };
        if !ok {
            return Err(Error::MalformedMatrixPolynomial(format!(
                "last-column entry {r} has degree {} out of range",
                last.degree()
            )));
        }
    }

    let mut g = mp.get(m - 1, m - 1).clone();
    for r in (0..m - 1).rev() {
        g = poly_add(mp.get(r, m - 1), &g.shl(n));
    }
    Ok(g)
}
