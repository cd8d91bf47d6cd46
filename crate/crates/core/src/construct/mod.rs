//! From primitive polynomials to xorshift generators.
//!
//! A state word `w` of `m` bits encodes the column vector `(x_1, ..., x_m)`
//! with `x_1` at the most significant bit and `x_m` at bit 0. Under that
//! convention the shift operator `R` is `w >> 1`, `L` is `(w << 1) & mask`,
//! and the selector bit of each stage is its LSB.

mod bitmatrix;
mod charpoly;
mod matpoly;
mod triplet;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2poly::{parse_hex_bits, primitivity, Factorization, Gf2Poly};

pub use bitmatrix::BitMatrix;
pub use charpoly::{charpoly_dense, charpoly_dense_bounded, DEFAULT_ORACLE_BOUND};
pub use matpoly::{build_matrix_polynomial, det_matrix_polynomial, MatrixPolynomial};
pub use triplet::{build_marsaglia_matrix, check_triplet, TripletSpec};

/// Word size `m`, order `n` and the tap words `v_0 .. v_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XorshiftSpec {
    m: usize,
    n: usize,
    taps: Vec<u64>,
    active: Vec<(usize, u64)>,
}

impl XorshiftSpec {
    pub fn new(m: usize, taps: Vec<u64>) -> Result<Self> {
        if !(1..=64).contains(&m) {
            return Err(Error::WordSizeRange(m));
        }
        if taps.is_empty() {
            return Err(Error::InvalidSpec("order n must be at least 1".into()));
        }
        let mask = word_mask(m);
        if let Some(&w) = taps.iter().find(|&&w| w & !mask != 0) {
            return Err(Error::WordOverflow { word: w, m });
        }
        let active = taps
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i, v))
            .collect();
        Ok(XorshiftSpec {
            m,
            n: taps.len(),
            taps,
            active,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn taps(&self) -> &[u64] {
        &self.taps
    }

    /// `(stage index, tap word)` for every nonzero tap.
    pub fn active_taps(&self) -> &[(usize, u64)] {
        &self.active
    }

    pub fn word_mask(&self) -> u64 {
        word_mask(self.m)
    }

    /// Reassembles the degree-`mn` polynomial the taps were read from.
    pub fn to_polynomial(&self) -> Gf2Poly {
        let (m, n) = (self.m, self.n);
        let mut f = Gf2Poly::monomial(m * n);
        for (i, &v) in self.taps.iter().enumerate() {
            for j in 0..m {
                if (v >> (m - 1 - j)) & 1 == 1 {
                    f.set_coeff(j * n + i, true);
                }
            }
        }
        f
    }

    /// Line-oriented text form: `m=`, `n=`, then `v<i>=hex:<word>`.
    pub fn to_text(&self) -> String {
        self.to_text_with_comments(&[])
    }

    pub fn to_text_with_comments(&self, comments: &[&str]) -> String {
        let mut s = String::new();
        for c in comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "m={}", self.m);
        let _ = writeln!(s, "n={}", self.n);
        for (i, v) in self.taps.iter().enumerate() {
            let _ = writeln!(s, "v{i}=hex:{v:x}");
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut m: Option<usize> = None;
        let mut n: Option<usize> = None;
        let mut taps: Vec<(usize, u64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("spec line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let int = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| err(format!("bad integer `{v}`")))
            };
            match key {
                "m" if m.is_none() => m = Some(int(value)?),
                "n" if n.is_none() => n = Some(int(value)?),
                "m" | "n" => return Err(err(format!("duplicate `{key}`"))),
                _ => {
                    let idx = key
                        .strip_prefix('v')
                        .and_then(|i| i.parse::<usize>().ok())
                        .ok_or_else(|| err(format!("unknown key `{key}`")))?;
                    let hex = value
                        .strip_prefix("hex:")
                        .ok_or_else(|| err("tap must be written as hex:<digits>".into()))?;
                    let limbs = parse_hex_bits(hex)?;
                    if limbs.iter().skip(1).any(|&l| l != 0) {
                        return Err(err(format!("tap v{idx} exceeds 64 bits")));
                    }
                    if taps.iter().any(|&(i, _)| i == idx) {
                        return Err(err(format!("duplicate v{idx}")));
                    }
                    taps.push((idx, limbs[0]));
                }
            }
        }
        let m = m.ok_or_else(|| Error::Parse("spec is missing `m=`".into()))?;
        let n = n.ok_or_else(|| Error::Parse("spec is missing `n=`".into()))?;
        taps.sort_unstable();
        if taps.len() != n || taps.iter().enumerate().any(|(k, &(i, _))| k != i) {
            return Err(Error::Parse(format!(
                "spec must list exactly v0..v{}",
                n.saturating_sub(1)
            )));
        }
        XorshiftSpec::new(m, taps.into_iter().map(|(_, v)| v).collect())
    }
}

impl std::str::FromStr for XorshiftSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

pub(crate) fn word_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Reads `v_i = (a_i, a_{n+i}, ..., a_{(m-1)n+i})` out of `f`, first
/// component in the most significant bit.
pub fn build_tap_vectors(f: &Gf2Poly, m: usize) -> Result<XorshiftSpec> {
    let degree = f.degree();
    if !(1..=64).contains(&m) {
        return Err(Error::WordSizeRange(m));
    }
    if f.is_zero() || degree == 0 || !degree.is_multiple_of(m) {
        return Err(Error::WordSizeDoesNotDivide { m, degree });
    }
    let n = degree / m;
    let taps = (0..n)
        .map(|i| {
            (0..m).fold(0u64, |w, j| {
                if f.coeff(j * n + i) {
                    w | 1u64 << (m - 1 - j)
                } else {
                    w
                }
            })
        })
        .collect();
    XorshiftSpec::new(m, taps)
}

/// The `mn x mn` block companion matrix: identity blocks on the block
/// superdiagonal and `(C_0, C_1, ..., C_{n-1})` in the bottom block row, where
/// `C_0 = R + v_0 e_m^T` and `C_i = v_i e_m^T`.
pub fn build_block_companion(spec: &XorshiftSpec) -> BitMatrix {
    let (m, n) = (spec.m(), spec.n());
    let mut t = BitMatrix::zeros(m * n);
    let id = BitMatrix::identity(m);
    for s in 0..n - 1 {
        t.set_block(s * m, (s + 1) * m, &id);
    }
    let bottom = (n - 1) * m;
    for (i, &v) in spec.taps().iter().enumerate() {
        let col = i * m + m - 1;
        for r in 0..m {
            if (v >> (m - 1 - r)) & 1 == 1 {
                t.set(bottom + r, col, true);
            }
        }
    }
    for r in 1..m {
        let cur = t.get(bottom + r, r - 1);
        t.set(bottom + r, r - 1, !cur);
    }
    t
}

/// Checks `f` is primitive, then reads off its taps.
pub fn construct_from_primitive(
    f: &Gf2Poly,
    m: usize,
    factorization: &Factorization,
) -> Result<XorshiftSpec> {
    let degree = f.degree();
    if m == 0 || f.is_zero() || degree == 0 || !degree.is_multiple_of(m) {
        return Err(Error::WordSizeDoesNotDivide { m, degree });
    }
    primitivity(f, factorization)?.map_err(Error::NotPrimitive)?;
    build_tap_vectors(f, m)
}

/// Result of a successful tap-constrained search.
#[derive(Debug, Clone)]
pub struct SampledSpec {
    pub spec: XorshiftSpec,
    pub polynomial: Gf2Poly,
    /// Primitivity tests performed, including the successful one.
    pub attempts: usize,
}

pub fn default_max_attempts(m: usize, n: usize) -> usize {
    64 * m * n
}

/// Searches for a primitive generator with exactly `k` xorshift operations:
/// stage 0 plus `k - 2` distinct random stages in `1..n` get random nonzero
/// tap columns, all other taps stay zero, and `a_0 = a_{mn} = 1`.
pub fn sample_k_tap<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    k: usize,
    rng: &mut R,
    factorization: &Factorization,
    max_attempts: usize,
) -> Result<SampledSpec> {
    if !(1..=64).contains(&m) {
        return Err(Error::WordSizeRange(m));
    }
    if n == 0 {
        return Err(Error::InvalidSpec("order n must be at least 1".into()));
    }
    if !(2..=n + 1).contains(&k) {
        return Err(Error::TapCountRange { k, max: n + 1 });
    }
    let d = m * n;
    if factorization.d() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: factorization.d(),
        });
    }
    for attempt in 1..=max_attempts {
        let mut columns = BTreeSet::from([0usize]);
        while columns.len() < k - 1 {
            columns.insert(rng.gen_range(1..n));
        }
        let mut f = Gf2Poly::monomial(d);
        for &l in &columns {
            loop {
                let bits: u64 = rng.gen::<u64>() & word_mask(m);
                // Stage 0 is nonzero through a_0 anyway; other stages must
                // not come out empty or the operation count drops below k.
                if l == 0 || bits != 0 {
                    for j in 0..m {
                        f.set_coeff(l + j * n, (bits >> j) & 1 == 1);
                    }
                    break;
                }
            }
        }
        f.set_coeff(0, true);
        if primitivity(&f, factorization)?.is_ok() {
            let spec = build_tap_vectors(&f, m)?;
            return Ok(SampledSpec {
                spec,
                polynomial: f,
                attempts: attempt,
            });
        }
    }
    Err(Error::AttemptsExhausted {
        attempts: max_attempts,
    })
}
