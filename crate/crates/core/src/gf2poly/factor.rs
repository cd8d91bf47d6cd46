//! Complete factorizations of Mersenne numbers `2^d - 1`.
//!
//! Lookup order is: caller-supplied table, the built-in table (every
//! `d <= 64`), then trial division followed by Pollard rho (Brent's variant).
//! Every prime is certified by deterministic Miller-Rabin, which is only
//! valid below [`MR_DETERMINISTIC_BOUND`]; larger primes are accepted only
//! from a table loaded as trusted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::LazyLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Miller-Rabin with the first thirteen prime bases is deterministic below
/// this value.
pub static MR_DETERMINISTIC_BOUND: LazyLock<BigUint> =
    LazyLock::new(|| "3317044064679887385961981".parse().unwrap());

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

static BUILTIN: LazyLock<FactorTable> = LazyLock::new(|| {
    FactorTable::parse(include_str!("../../data/mersenne_factors.txt"), false)
        .expect("built-in factor table is valid")
});

/// `2^d - 1`.
pub fn mersenne(d: usize) -> BigUint {
    (BigUint::one() << d) - BigUint::one()
}

/// Miller-Rabin over the fixed base set. Deterministic for inputs below
/// [`MR_DETERMINISTIC_BOUND`]; above it a `true` is only probable.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `2^d - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    d: usize,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Validates and sorts the factor list. With `trust_large`, primes at or
    /// above [`MR_DETERMINISTIC_BOUND`] are accepted if Miller-Rabin does
    /// not reject them; otherwise they are refused.
    pub fn new(d: usize, mut factors: Vec<(BigUint, u32)>, trust_large: bool) -> Result<Self> {
        if d == 0 {
            return Err(Error::FactorTable("d must be at least 1".into()));
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::FactorTable(format!(
                    "d={d}: prime {} listed twice",
                    w[0].0
                )));
            }
        }
        let mut product = BigUint::one();
        for (p, e) in &factors {
            if *e == 0 {
                return Err(Error::FactorTable(format!("d={d}: zero exponent on {p}")));
            }
            if !is_probable_prime(p) {
                return Err(Error::FactorTable(format!("d={d}: {p} is composite")));
            }
            if *p >= *MR_DETERMINISTIC_BOUND && !trust_large {
                return Err(Error::FactorTable(format!(
                    "d={d}: {p} is too large to certify; load the table as trusted"
                )));
            }
            product *= p.pow(*e);
        }
        if product != mersenne(d) {
            return Err(Error::FactorTable(format!(
                "d={d}: product of factors is not 2^{d}-1"
            )));
        }
        Ok(Factorization { d, factors })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// `2^d - 1`.
    pub fn value(&self) -> BigUint {
        mersenne(self.d)
    }

    /// Euler's totient of `2^d - 1`, computed multiplicatively.
    pub fn totient(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
            acc * p.pow(e - 1) * (p - 1u32)
        })
    }

    /// One table line, e.g. `8: 3 * 5 * 17`.
    pub fn to_line(&self) -> String {
        let mut s = format!("{}:", self.d);
        if self.factors.is_empty() {
            s.push_str(" 1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            s.push_str(if i == 0 { " " } else { " * " });
            let _ = write!(s, "{p}");
            if *e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }
}

/// A set of factorizations keyed by `d`, read from the line format
/// `d: p1^e1 * p2^e2 * ...` with `#` comments.
#[derive(Debug, Clone, Default)]
pub struct FactorTable {
    entries: BTreeMap<usize, Factorization>,
}

impl FactorTable {
    pub fn parse(text: &str, trust_large: bool) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::FactorTable(format!("line {}: {msg}", lineno + 1));
            let (d, rest) = line.split_once(':').ok_or_else(|| err("missing `:`"))?;
            let d: usize = d.trim().parse().map_err(|_| err("bad d"))?;
            let mut factors = Vec::new();
            for tok in rest.split('*').map(str::trim).filter(|t| !t.is_empty()) {
                let (p, e) = match tok.split_once('^') {
                    Some((p, e)) => (
                        p.trim(),
                        e.trim().parse::<u32>().map_err(|_| err("bad exponent"))?,
                    ),
                    None => (tok, 1),
                };
                let p: BigUint = p.parse().map_err(|_| err("bad prime"))?;
                if p.is_one() {
                    continue;
                }
                factors.push((p, e));
            }
            let f = Factorization::new(d, factors, trust_large).map_err(|e| err(&e.to_string()))?;
            if entries.insert(d, f).is_some() {
                return Err(err("duplicate d"));
            }
        }
        Ok(FactorTable { entries })
    }

    pub fn load(path: &Path, trust_large: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::FactorTable(format!("{}: {e}", path.display())))?;
        Self::parse(&text, trust_large)
    }

    pub fn get(&self, d: usize) -> Option<&Factorization> {
        self.entries.get(&d)
    }

    pub fn insert(&mut self, f: Factorization) {
        self.entries.insert(f.d(), f);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for f in self.entries.values() {
            s.push_str(&f.to_line());
            s.push('\n');
        }
        s
    }
}

/// The factorizations shipped with the crate (`1 <= d <= 64`).
pub fn builtin_table() -> &'static FactorTable {
    &BUILTIN
}

/// Effort limits for computing a factorization from scratch.
#[derive(Debug, Clone, Copy)]
pub struct FactorBudget {
    pub trial_bound: u64,
    /// Iterations per Pollard-rho attempt.
    pub rho_iterations: u64,
    /// Distinct polynomial constants tried before giving up on a cofactor.
    pub rho_attempts: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 22,
            rho_attempts: 8,
        }
    }
}

/// Factorization of `2^d - 1` from `table`, else the built-in table, else
/// computed with the default [`FactorBudget`].
pub fn factor_mersenne(d: usize, table: Option<&FactorTable>) -> Result<Factorization> {
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    if let Some(f) = table.and_then(|t| t.get(d)) {
        return Ok(f.clone());
    }
    if let Some(f) = builtin_table().get(d) {
        return Ok(f.clone());
    }
    factor_mersenne_with(d, &FactorBudget::default())
}

fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn small_primes(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    if bound < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; bound + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= bound {
        if sieve[i] {
            let mut j = i * i;
            while j <= bound {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

/// Computes the factorization of `2^d - 1` without consulting any table.
pub fn factor_mersenne_with(d: usize, budget: &FactorBudget) -> Result<Factorization> {
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    let unavailable = |reason: String| Error::FactorizationUnavailable { d, reason };
    let mut rest = mersenne(d);
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();

    for p in small_primes(budget.trial_bound).into_iter().skip(1) {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        // p | 2^d - 1 exactly when 2^d = 1 (mod p).
        if pow_mod_u64(2, d as u64, p) != 1 {
            continue;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            *found.entry(pb.clone()).or_insert(0) += 1;
        }
    }

    let mut pending = vec![rest];
    while let Some(c) = pending.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            if c >= *MR_DETERMINISTIC_BOUND {
                return Err(unavailable(format!(
                    "cofactor {c} cannot be certified prime; supply a trusted factor table"
                )));
            }
            *found.entry(c).or_insert(0) += 1;
            continue;
        }
        let root = c.sqrt();
        if &root * &root == c {
            pending.push(root.clone());
            pending.push(root);
            continue;
        }
        let split = (1..=budget.rho_attempts)
            .find_map(|k| pollard_brent(&c, &BigUint::from(k), budget.rho_iterations))
            .ok_or_else(|| {
                unavailable(format!(
                    "Pollard rho could not split {c} within the effort budget"
                ))
            })?;
        let other = &c / &split;
        pending.push(split);
        pending.push(other);
    }

    Factorization::new(d, found.into_iter().collect(), false)
}

/// Brent's cycle-finding variant of Pollard rho on `x^2 + c`. Returns a
/// nontrivial divisor of `n`, or `None` when the budget runs out or the walk
/// collapses to `n` itself.
fn pollard_brent(n: &BigUint, c: &BigUint, max_iterations: u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let f = |v: &BigUint| (v * v + c) % n;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };

    let mut y = BigUint::from(2u32) % n;
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    let mut spent: u64 = 0;

    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = (q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        spent += 2 * r;
        if spent > max_iterations {
            return None;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn fact(d: usize) -> Vec<(u64, u32)> {
        factor_mersenne(d, None)
            .unwrap()
            .factors()
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn small_examples() {
        assert!(fact(1).is_empty());
        assert_eq!(fact(8), vec![(3, 1), (5, 1), (17, 1)]);
        assert_eq!(fact(16), vec![(3, 1), (5, 1), (17, 1), (257, 1)]);
        assert_eq!(fact(6), vec![(3, 2), (7, 1)]);
        assert!(matches!(factor_mersenne(0, None), Err(Error::DegreeZero)));
    }

    #[test]
    fn computed_factorizations_match_builtin_table() {
        let budget = FactorBudget::default();
        let table = builtin_table();
        assert_eq!(table.len(), 64);
        for d in 1..=64 {
            let computed = factor_mersenne_with(d, &budget).unwrap();
            assert_eq!(Some(&computed), table.get(d), "d={d}");
        }
    }

    #[test]
    fn factorizations_reassemble() {
        for d in [65usize, 70, 72, 80, 84, 90, 96] {
            let f = factor_mersenne(d, None).unwrap();
            let product = f
                .factors()
                .iter()
                .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(product, mersenne(d), "d={d}");
        }
    }

    #[test]
    fn exhausted_budget_fails_explicitly() {
        // 2^62 - 1 = 3 * 715827883 * 2147483647; a tiny budget cannot split it.
        let budget = FactorBudget {
            trial_bound: 100,
            rho_iterations: 8,
            rho_attempts: 1,
        };
        assert!(matches!(
            factor_mersenne_with(62, &budget),
            Err(Error::FactorizationUnavailable { d: 62, .. })
        ));
    }

    #[test]
    fn uncertifiable_cofactor_is_refused() {
        // 2^89 - 1 is prime and larger than the deterministic MR bound.
        assert!(matches!(
            factor_mersenne_with(89, &FactorBudget::default()),
            Err(Error::FactorizationUnavailable { d: 89, .. })
        ));
        let line = format!("89: {}", mersenne(89));
        assert!(FactorTable::parse(&line, false).is_err());
        let t = FactorTable::parse(&line, true).unwrap();
        assert_eq!(factor_mersenne(89, Some(&t)).unwrap().factors().len(), 1);
    }

    #[test]
    fn table_parsing() {
        let t = FactorTable::parse("# comment\n4: 3 * 5\n6: 3^2 * 7  # trailing\n1: 1\n", false)
            .unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(6).unwrap().to_line(), "6: 3^2 * 7");
        assert_eq!(t.get(1).unwrap().to_line(), "1: 1");
        let again = FactorTable::parse(&t.to_text(), false).unwrap();
        assert_eq!(again.get(4), t.get(4));

        assert!(FactorTable::parse("4: 3 * 7\n", false).is_err());
        assert!(FactorTable::parse("4: 15\n", false).is_err());
        assert!(FactorTable::parse("4 3 * 5\n", false).is_err());
        assert!(FactorTable::parse("4: 3 * 5\n4: 3 * 5\n", false).is_err());
    }

    #[test]
    fn supplied_table_takes_precedence() {
        let t = FactorTable::parse("4: 5 * 3\n", false).unwrap();
        assert_eq!(
            factor_mersenne(4, Some(&t)).unwrap(),
            factor_mersenne(4, None).unwrap()
        );
    }

    #[test]
    fn miller_rabin() {
        let primes = [2u64, 3, 5, 41, 43, 257, 65537, 2147483647, 6700417];
        for p in primes {
            assert!(is_probable_prime(&BigUint::from(p)), "{p}");
        }
        // Strong pseudoprimes to several small bases.
        let composites = [1u64, 4, 561, 3215031751, 3825123056546413051];
        for c in composites {
            assert!(!is_probable_prime(&BigUint::from(c)), "{c}");
        }
    }

    #[test]
    fn totient() {
        assert_eq!(
            factor_mersenne(4, None).unwrap().totient(),
            BigUint::from(8u32)
        );
        assert_eq!(
            factor_mersenne(8, None).unwrap().totient(),
            BigUint::from(128u32)
        );
        assert_eq!(
            factor_mersenne(6, None).unwrap().totient(),
            BigUint::from(36u32)
        );
    }
}
