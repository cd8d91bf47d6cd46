//! Polynomials over GF(2).
//!
//! Coefficients are bit-packed into 64-bit limbs with `a_0` at bit 0 of the
//! first limb. Values are kept normalized: the last limb is never zero, so
//! the zero polynomial has no limbs at all.

mod factor;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, PrimitivityFailure, Result};

pub use factor::{
    builtin_table, factor_mersenne, factor_mersenne_with, is_probable_prime, mersenne,
    FactorBudget, FactorTable, Factorization, MR_DETERMINISTIC_BOUND,
};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    limbs: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly { limbs: vec![1] }
    }

    /// The monomial `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut limbs = vec![0u64; k / 64 + 1];
        limbs[k / 64] = 1u64 << (k % 64);
        Gf2Poly { limbs }
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Gf2Poly { limbs }
    }

    pub fn from_u64(bits: u64) -> Self {
        Self::from_limbs(vec![bits])
    }

    pub fn from_u128(bits: u128) -> Self {
        Self::from_limbs(vec![bits as u64, (bits >> 64) as u64])
    }

    /// Builds a polynomial from the exponents of its nonzero terms.
    /// Repeated exponents cancel.
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let mut p = Gf2Poly::zero();
        for &d in degrees {
            p.flip(d);
        }
        p
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// Low 64 coefficients as a word (`None` if the degree is 64 or more).
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Index of the highest set coefficient. The zero polynomial reports 0;
    /// use [`Gf2Poly::is_zero`] to tell it apart from nonzero constants.
    pub fn degree(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(&top) => (self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize,
        }
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|l| (l >> (i % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        if self.coeff(i) != value {
            self.flip(i);
        }
    }

    fn flip(&mut self, i: usize) {
        if self.limbs.len() <= i / 64 {
            self.limbs.resize(i / 64 + 1, 0);
        }
        self.limbs[i / 64] ^= 1u64 << (i % 64);
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero terms, highest first.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (li, &limb) in self.limbs.iter().enumerate().rev() {
            let mut bits = limb;
            while bits != 0 {
                let top = 63 - bits.leading_zeros() as usize;
                out.push(li * 64 + top);
                bits &= !(1u64 << top);
            }
        }
        out
    }

    /// Multiplies by `X^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + k / 64 + 1];
        xor_shifted(&mut out, &self.limbs, k);
        Self::from_limbs(out)
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        poly_add(self, other)
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        poly_mul(self, other)
    }

    /// Remainder on division by `modulus`.
    pub fn rem(&self, modulus: &Gf2Poly) -> Result<Gf2Poly> {
        if modulus.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let mut r = self.limbs.clone();
        reduce_in_place(&mut r, modulus);
        Ok(Gf2Poly::from_limbs(r))
    }

    /// Splits coefficients into consecutive chunks of `width`: chunk `i`
    /// holds `a_{i*width} .. a_{(i+1)*width - 1}` shifted down to degree 0.
    pub fn chunk(&self, index: usize, width: usize) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for k in 0..width {
            if self.coeff(index * width + k) {
                out.flip(k);
            }
        }
        out
    }

    /// `hex:` text form with `a_0` as the least significant bit.
    pub fn to_hex_text(&self) -> String {
        if self.is_zero() {
            return "hex:0".to_string();
        }
        let mut s = String::from("hex:");
        let top = self.limbs.len() - 1;
        s.push_str(&format!("{:x}", self.limbs[top]));
        for limb in self.limbs[..top].iter().rev() {
            s.push_str(&format!("{limb:016x}"));
        }
        s
    }

    /// `degs:` text form, highest degree first.
    pub fn to_degs_text(&self) -> String {
        let degs: Vec<String> = self.degrees().iter().map(|d| d.to_string()).collect();
        format!("degs:{}", degs.join(","))
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(hex) = text.strip_prefix("hex:") {
            parse_hex_bits(hex).map(Gf2Poly::from_limbs)
        } else if let Some(list) = text.strip_prefix("degs:") {
            let mut p = Gf2Poly::zero();
            for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let d: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree `{tok}`")))?;
                if p.coeff(d) {
                    return Err(Error::Parse(format!("degree {d} listed twice")));
                }
                p.flip(d);
            }
            Ok(p)
        } else {
            Err(Error::Parse(format!(
                "polynomial must start with `hex:` or `degs:`, got `{text}`"
            )))
        }
    }
}

/// Parses a hex string into little-endian 64-bit limbs.
pub(crate) fn parse_hex_bits(hex: &str) -> Result<Vec<u64>> {
    let hex = hex.trim();
    let hex = hex
        .strip_prefix("0x")
        .or_else(|| hex.strip_prefix("0X"))
        .unwrap_or(hex);
    if hex.is_empty() {
        return Err(Error::Parse("empty hex string".into()));
    }
    let mut limbs = vec![0u64; hex.len().div_ceil(16)];
    for (i, c) in hex.chars().rev().enumerate() {
        let v = c
            .to_digit(16)
            .ok_or_else(|| Error::Parse(format!("invalid hex digit `{c}`")))?
            as u64;
        limbs[i / 16] |= v << (4 * (i % 16));
    }
    Ok(limbs)
}

impl FromStr for Gf2Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .degrees()
            .into_iter()
            .map(|d| match d {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{d}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `dst ^= src * X^shift`; `dst` must be long enough.
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (w, b) = (shift / 64, shift % 64);
    if b == 0 {
        for (i, &s) in src.iter().enumerate() {
            dst[i + w] ^= s;
        }
    } else {
        for (i, &s) in src.iter().enumerate() {
            dst[i + w] ^= s << b;
            if s >> (64 - b) != 0 {
                dst[i + w + 1] ^= s >> (64 - b);
            }
        }
    }
}

fn limbs_degree(limbs: &[u64]) -> Option<usize> {
    limbs
        .iter()
        .rposition(|&l| l != 0)
        .map(|i| i * 64 + 63 - limbs[i].leading_zeros() as usize)
}

fn reduce_in_place(r: &mut Vec<u64>, modulus: &Gf2Poly) {
    let md = modulus.degree();
    while let Some(rd) = limbs_degree(r) {
        if rd < md {
            break;
        }
        xor_shifted(r, &modulus.limbs, rd - md);
    }
    while r.last() == Some(&0) {
        r.pop();
    }
}

pub fn poly_add(a: &Gf2Poly, b: &Gf2Poly) -> Gf2Poly {
    let (long, short) = if a.limbs.len() >= b.limbs.len() {
        (a, b)
    } else {
        (b, a)
    };
    let mut limbs = long.limbs.clone();
    for (d, s) in limbs.iter_mut().zip(&short.limbs) {
        *d ^= s;
    }
    Gf2Poly::from_limbs(limbs)
}

/// Plain carry-less product.
pub fn poly_mul(a: &Gf2Poly, b: &Gf2Poly) -> Gf2Poly {
    if a.is_zero() || b.is_zero() {
        return Gf2Poly::zero();
    }
    let (sparse, dense) = if a.weight() <= b.weight() {
        (a, b)
    } else {
        (b, a)
    };
    let mut out = vec![0u64; a.limbs.len() + b.limbs.len() + 1];
    for (li, &limb) in sparse.limbs.iter().enumerate() {
        let mut bits = limb;
        while bits != 0 {
            let t = bits.trailing_zeros() as usize;
            xor_shifted(&mut out, &dense.limbs, li * 64 + t);
            bits &= bits - 1;
        }
    }
    Gf2Poly::from_limbs(out)
}

/// `(a * b) mod modulus`, or the plain product when `modulus` is `None`.
pub fn poly_mulmod(a: &Gf2Poly, b: &Gf2Poly, modulus: Option<&Gf2Poly>) -> Result<Gf2Poly> {
    match modulus {
        None => Ok(poly_mul(a, b)),
        Some(m) => {
            if m.is_zero() {
                return Err(Error::ZeroModulus);
            }
            let mut p = poly_mul(a, b).limbs;
            reduce_in_place(&mut p, m);
            Ok(Gf2Poly::from_limbs(p))
        }
    }
}

/// `base^exponent mod modulus` by left-to-right square-and-multiply.
pub fn poly_powmod(base: &Gf2Poly, exponent: &BigUint, modulus: &Gf2Poly) -> Result<Gf2Poly> {
    if modulus.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let base = base.rem(modulus)?;
    let mut acc = Gf2Poly::one().rem(modulus)?;
    for i in (0..exponent.bits()).rev() {
        acc = poly_mulmod(&acc, &acc, Some(modulus))?;
        if exponent.bit(i) {
            acc = poly_mulmod(&acc, &base, Some(modulus))?;
        }
    }
    Ok(acc)
}

pub fn poly_gcd(a: &Gf2Poly, b: &Gf2Poly) -> Result<Gf2Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y)?;
        x = y;
        y = r;
    }
    Ok(x)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `X^(2^d) = X (mod f)` and `gcd(X^(2^(d/p)) - X, f) = 1` for
/// every prime `p | d`.
pub fn is_irreducible(f: &Gf2Poly) -> Result<bool> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let d = f.degree();
    let x = Gf2Poly::x().rem(f)?;
    let checkpoints: Vec<usize> = prime_divisors(d).into_iter().map(|p| d / p).collect();
    // frob[k] = X^(2^k) mod f, walked up to k = d.
    let mut frob = x.clone();
    for k in 1..=d {
        frob = poly_mulmod(&frob, &frob, Some(f))?;
        if checkpoints.contains(&k) {
            let g = poly_gcd(&poly_add(&frob, &x), f)?;
            if !g.is_one() {
                return Ok(false);
            }
        }
    }
    Ok(frob == x)
}

/// Full primitivity verdict, with the failing criterion on rejection.
pub fn primitivity(
    f: &Gf2Poly,
    factorization: &Factorization,
) -> Result<std::result::Result<(), PrimitivityFailure>> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if f.degree() != factorization.d() {
        return Err(Error::DegreeMismatch {
            expected: factorization.d(),
            found: f.degree(),
        });
    }
    if !f.coeff(0) {
        return Ok(Err(PrimitivityFailure::ZeroConstantTerm));
    }
    if !is_irreducible(f)? {
        return Ok(Err(PrimitivityFailure::Reducible));
    }
    let order = factorization.value();
    let x = Gf2Poly::x();
    for (p, _) in factorization.factors() {
        if poly_powmod(&x, &(&order / p), f)?.is_one() {
            return Ok(Err(PrimitivityFailure::ProperOrder { prime: p.clone() }));
        }
    }
    Ok(Ok(()))
}

pub fn is_primitive(f: &Gf2Poly, factorization: &Factorization) -> Result<bool> {
    Ok(primitivity(f, factorization)?.is_ok())
}

/// Rejection-samples a primitive polynomial of degree `factorization.d()`
/// with `a_0 = a_d = 1` and uniformly random middle coefficients.
pub fn random_primitive_with<R: Rng + ?Sized>(
    factorization: &Factorization,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Gf2Poly> {
    let d = factorization.d();
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    for _ in 0..max_attempts {
        let mut limbs: Vec<u64> = (0..d / 64 + 1).map(|_| rng.gen()).collect();
        let top = d % 64;
        let last = limbs.len() - 1;
        limbs[last] &= (1u64 << top).wrapping_sub(1) | (1u64 << top);
        let mut f = Gf2Poly::from_limbs(limbs);
        f.set_coeff(0, true);
        f.set_coeff(d, true);
        if is_primitive(&f, factorization)? {
            return Ok(f);
        }
    }
    Err(Error::AttemptsExhausted {
        attempts: max_attempts,
    })
}

/// [`random_primitive_with`] using the built-in factorization of `2^d - 1`.
pub fn random_primitive<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Gf2Poly> {
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    let fact = factor_mersenne(d, None)?;
    random_primitive_with(&fact, rng, max_attempts)
}
