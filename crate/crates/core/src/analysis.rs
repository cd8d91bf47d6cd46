//! Period certification, the even-seed weakness, tap accounting, the
//! generator census and the word-operation cost model.

use std::fmt;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::construct::{det_matrix_polynomial, MatrixPolynomial, XorshiftSpec};
use crate::error::{Error, Result};
use crate::generator::{seed, step};
use crate::gf2poly::{is_primitive, Factorization};

/// Largest `m * n` for which orbits are walked exhaustively.
pub const ORBIT_BOUND: usize = 24;
/// Largest `n * l` accepted by [`weakness_trace`].
pub const TRACE_BUDGET: usize = 1 << 20;
const CANCEL_CHECK_INTERVAL: u64 = 1 << 16;

/// Cycle length through `seed_words`.
pub fn orbit_period(spec: &XorshiftSpec, seed_words: &[u64]) -> Result<u64> {
    orbit_period_cancellable(spec, seed_words, &AtomicBool::new(false))
}

/// [`orbit_period`] that polls `cancel` every 2^16 steps.
pub fn orbit_period_cancellable(
    spec: &XorshiftSpec,
    seed_words: &[u64],
    cancel: &AtomicBool,
) -> Result<u64> {
    let mn = spec.m() * spec.n();
    if mn > ORBIT_BOUND {
        return Err(Error::BruteForceBound {
            mn,
            bound: ORBIT_BOUND,
        });
    }
    let (mut state, _) = seed(spec, seed_words)?;
    // A nonsingular map permutes the state space, so the orbit is a pure
    // cycle; a singular one may never come back.
    let limit = 1u64 << mn;
    for k in 1..=limit {
        step(spec, &mut state);
        if state.words == seed_words {
            return Ok(k);
        }
        if k % CANCEL_CHECK_INTERVAL == 0 && cancel.load(Ordering::Relaxed) {
            return Err(Error::Cancelled);
        }
    }
    Err(Error::InvalidSpec(
        "seed does not lie on a cycle; the transition matrix is singular".into(),
    ))
}

/// Whether the spec has period `2^{mn} - 1`. The characteristic polynomial
/// is rebuilt from the taps through `M(X)` and tested for primitivity; for
/// `mn <= 24` one orbit is also walked and the two answers must agree.
pub fn verify_full_period(spec: &XorshiftSpec, factorization: &Factorization) -> Result<bool> {
    let mn = spec.m() * spec.n();
    if factorization.d() != mn {
        return Err(Error::DegreeMismatch {
            expected: mn,
            found: factorization.d(),
        });
    }
    let f = det_matrix_polynomial(&MatrixPolynomial::from_spec(spec))?;
    let primitive = is_primitive(&f, factorization)?;
    if mn <= ORBIT_BOUND {
        let mut seed_words = vec![0u64; spec.n()];
        seed_words[spec.n() - 1] = 1;
        let orbit = match orbit_period(spec, &seed_words) {
            Ok(p) => p,
            Err(Error::InvalidSpec(_)) => 0,
            Err(e) => return Err(e),
        };
        let full = orbit == (1u64 << mn) - 1;
        if full != primitive {
            return Err(Error::PeriodInconsistency { primitive, orbit });
        }
    }
    Ok(primitive)
}

/// One right shift plus one XOR per nonzero tap.
pub fn tap_count(spec: &XorshiftSpec) -> usize {
    1 + spec.active_taps().len()
}

/// Outcome of checking `s_{n+j} = R^{ceil(j/n)} s_{(j-1) mod n}` on a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub holds: bool,
    /// Smallest `j` where the identity failed.
    pub first_mismatch: Option<usize>,
}

/// Degenerate start-up of a generator seeded with `(0, ..., 0, d)`.
#[derive(Debug, Clone)]
pub struct WeaknessReport {
    pub m: usize,
    pub n: usize,
    pub d: u64,
    pub l: u32,
    /// Output words of the first `n * l` steps.
    pub trace: Vec<u64>,
    /// `(n-1)` zeros then `d/2`, `(n-1)` zeros then `d/4`, ... up to `d/2^l`.
    pub predicted: Vec<u64>,
    pub pattern_ok: bool,
    /// States after each step, oldest stage first; entry 0 is the seed.
    pub states: Vec<Vec<u64>>,
    /// Word sequence indexed from 0 at the first seed word, so `s_{n+j}` is
    /// the `(j+1)`-th output.
    pub closed_form_seed_indexed: ClosedFormCheck,
    /// `s_{n+j}` read as the `j`-th output, i.e. the seed occupying
    /// positions `1..=n` of the sequence.
    pub closed_form_output_indexed: ClosedFormCheck,
}

fn check_closed_form(seq: &[u64], n: usize, total: usize, offset: usize) -> ClosedFormCheck {
    let first_mismatch = (1..total).find(|&j| {
        let shift = j.div_ceil(n) as u32;
        let src = seq[(j - 1) % n];
        let rhs = src.checked_shr(shift).unwrap_or(0);
        seq[n + j - offset] != rhs
    });
    ClosedFormCheck {
        holds: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// Seeds `(0, ..., 0, d)` with `2^l | d` and records the first `n * l`
/// outputs, which are pure right shifts of `d` whatever the taps are.
pub fn weakness_trace(spec: &XorshiftSpec, d: u64, l: u32) -> Result<WeaknessReport> {
    let (m, n) = (spec.m(), spec.n());
    if l == 0 || d == 0 || d.trailing_zeros() < l {
        return Err(Error::NotDivisible { d, l });
    }
    let total = n * l as usize;
    if total > TRACE_BUDGET {
        return Err(Error::TraceBudget {
            len: total,
            bound: TRACE_BUDGET,
        });
    }
    let mut words = vec![0u64; n];
    words[n - 1] = d;
    let (mut state, _) = seed(spec, &words)?;

    let mut states = vec![state.words.clone()];
    let mut trace = Vec::with_capacity(total);
    for _ in 0..total {
        trace.push(step(spec, &mut state));
        states.push(state.words.clone());
    }
    let predicted: Vec<u64> = (1..=l)
        .flat_map(|b| std::iter::repeat_n(0, n - 1).chain(std::iter::once(d >> b)))
        .collect();

    let seq: Vec<u64> = words.iter().chain(&trace).copied().collect();
    Ok(WeaknessReport {
        m,
        n,
        d,
        l,
        pattern_ok: trace == predicted,
        closed_form_seed_indexed: check_closed_form(&seq, n, total, 0),
        closed_form_output_indexed: check_closed_form(&seq, n, total, 1),
        trace,
        predicted,
        states,
    })
}

impl WeaknessReport {
    /// ASCII table with one row per iteration. Iteration 1 is the seed;
    /// states are listed newest stage first.
    pub fn render_table(&self) -> String {
        let digits = self.m.div_ceil(4).max(1);
        let word = |w: u64| format!("{w:0digits$x}");
        let rows: Vec<(String, String, String, String)> = self
            .states
            .iter()
            .enumerate()
            .map(|(k, st)| {
                let state = st
                    .iter()
                    .rev()
                    .map(|&w| word(w))
                    .collect::<Vec<_>>()
                    .join(", ");
                let out = if k == 0 {
                    "-".to_string()
                } else {
                    word(self.trace[k - 1])
                };
                (
                    (k + 1).to_string(),
                    k.to_string(),
                    format!("({state})"),
                    out,
                )
            })
            .collect();
        let headers = ("Iteration No.", "Step", "States (newest first)", "Output");
        let w0 = rows
            .iter()
            .map(|r| r.0.len())
            .max()
            .unwrap_or(0)
            .max(headers.0.len());
        let w1 = rows
            .iter()
            .map(|r| r.1.len())
            .max()
            .unwrap_or(0)
            .max(headers.1.len());
        let w2 = rows
            .iter()
            .map(|r| r.2.len())
            .max()
            .unwrap_or(0)
            .max(headers.2.len());
        let w3 = rows
            .iter()
            .map(|r| r.3.len())
            .max()
            .unwrap_or(0)
            .max(headers.3.len());
        let rule = format!(
            "+{}+{}+{}+{}+\n",
            "-".repeat(w0 + 2),
            "-".repeat(w1 + 2),
            "-".repeat(w2 + 2),
            "-".repeat(w3 + 2)
        );
        let mut s = rule.clone();
        let _ = writeln!(
            s,
            "| {:>w0$} | {:>w1$} | {:<w2$} | {:>w3$} |",
            headers.0, headers.1, headers.2, headers.3
        );
        s.push_str(&rule);
        for r in &rows {
            let _ = writeln!(
                s,
                "| {:>w0$} | {:>w1$} | {:<w2$} | {:>w3$} |",
                r.0, r.1, r.2, r.3
            );
        }
        s.push_str(&rule);
        s
    }

    pub fn summary(&self) -> String {
        let fmt_check = |c: &ClosedFormCheck| match c.first_mismatch {
            None => "holds".to_string(),
            Some(j) => format!("fails first at j={j}"),
        };
        format!(
            "m={} n={} d={:#x} l={}\npattern_ok={}\nclosed form, seed-indexed (s_0 = first seed word): {}\nclosed form, output-indexed (s_{{n+j}} = j-th output): {}\n",
            self.m,
            self.n,
            self.d,
            self.l,
            self.pattern_ok,
            fmt_check(&self.closed_form_seed_indexed),
            fmt_check(&self.closed_form_output_indexed),
        )
    }
}

/// Number of distinct full-period generators of order `n` over `GF(2^m)`:
/// `phi(2^{mn} - 1) / (mn)`.
pub fn census(m: usize, n: usize, factorization: &Factorization) -> Result<BigUint> {
    let mn = m * n;
    if factorization.d() != mn {
        return Err(Error::DegreeMismatch {
            expected: mn,
            found: factorization.d(),
        });
    }
    let (q, r) = factorization.totient().div_rem(&BigUint::from(mn));
    if !r.is_zero() {
        return Err(Error::CensusViolation { mn });
    }
    Ok(q)
}

/// Exact nonnegative rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn gt_int(&self, k: u128) -> bool {
        self.num > k * self.den
    }

    pub fn lt_int(&self, k: u128) -> bool {
        self.num < k * self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.num.gcd(&self.den).max(1);
        write!(f, "{}/{}", self.num / g, self.den / g)
    }
}

/// Word-operation bounds for producing `l` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCountBounds {
    pub iterations: u128,
    pub lower: u128,
    pub upper: u128,
}

/// `(n + 2) ceil(l/m) <= N <= (2n + 1) ceil(l/m)`.
pub fn op_count_bounds(m: usize, n: usize, l: u128) -> OpCountBounds {
    let iterations = l.div_ceil(m as u128);
    OpCountBounds {
        iterations,
        lower: (n as u128 + 2) * iterations,
        upper: (2 * n as u128 + 1) * iterations,
    }
}

/// Interval that `N_1 / N_2` must lie in when the same degree-`mn`
/// polynomial is split with word size `m1` and `2 * m1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioInterval {
    pub narrow: OpCountBounds,
    pub wide: OpCountBounds,
    pub low: Ratio,
    pub high: Ratio,
}

impl RatioInterval {
    pub fn strictly_within(&self, lo: u128, hi: u128) -> bool {
        self.low.gt_int(lo) && self.high.lt_int(hi)
    }
}

pub fn word_size_ratio(mn: usize, m1: usize, l: u128) -> Result<RatioInterval> {
    let m2 = 2 * m1;
    if m1 == 0 || !mn.is_multiple_of(m2) {
        return Err(Error::WordSizeDoesNotDivide { m: m2, degree: mn });
    }
    let narrow = op_count_bounds(m1, mn / m1, l);
    let wide = op_count_bounds(m2, mn / m2, l);
    if wide.lower == 0 {
        return Err(Error::InvalidSpec("bit count must be positive".into()));
    }
    Ok(RatioInterval {
        narrow,
        wide,
        low: Ratio {
            num: narrow.lower,
            den: wide.upper,
        },
        high: Ratio {
            num: narrow.upper,
            den: wide.lower,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_tap_vectors, construct_from_primitive};
    use crate::generator::GeneratorState;
    use crate::gf2poly::{factor_mersenne, random_primitive};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec_of(f: &str, m: usize) -> XorshiftSpec {
        build_tap_vectors(&f.parse().unwrap(), m).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let s = spec_of("degs:4,1,0", 2);
        for a in 0..4u64 {
            for b in 0..4u64 {
                if a | b != 0 {
                    assert_eq!(orbit_period(&s, &[a, b]).unwrap(), 15);
                }
            }
        }
        assert_eq!(
            orbit_period(&spec_of("degs:4,3,2,1,0", 2), &[1, 0]).unwrap(),
            5
        );
        assert_eq!(orbit_period(&spec_of("degs:2,1,0", 1), &[1, 0]).unwrap(), 3);
        assert!(matches!(orbit_period(&s, &[0, 0]), Err(Error::ZeroSeed)));
        let big = XorshiftSpec::new(5, vec![1; 5]).unwrap();
        assert!(matches!(
            orbit_period(&big, &[1; 5]),
            Err(Error::BruteForceBound { mn: 25, .. })
        ));
    }

    #[test]
    fn orbit_honours_cancellation() {
        let fact = factor_mersenne(24, None).unwrap();
        let f = random_primitive(24, &mut ChaCha8Rng::seed_from_u64(24), 10_000).unwrap();
        let spec = construct_from_primitive(&f, 4, &fact).unwrap();
        let cancel = AtomicBool::new(true);
        assert!(matches!(
            orbit_period_cancellable(&spec, &[1, 0, 0, 0, 0, 0], &cancel),
            Err(Error::Cancelled)
        ));
    }

    #[test]
    fn singular_spec_has_no_cycle_through_seed() {
        // m=1, n=2, v = (0, 1): the state (1, 0) falls into (0, 0).
        let s = XorshiftSpec::new(1, vec![0, 1]).unwrap();
        assert!(matches!(
            orbit_period(&s, &[1, 0]),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn full_period_examples() {
        let f4 = factor_mersenne(4, None).unwrap();
        assert!(verify_full_period(&spec_of("degs:4,1,0", 2), &f4).unwrap());
        assert!(!verify_full_period(&spec_of("degs:4,3,2,1,0", 2), &f4).unwrap());
        let zero_v0 = XorshiftSpec::new(2, vec![0b00, 0b10]).unwrap();
        assert!(!verify_full_period(&zero_v0, &f4).unwrap());
    }

    #[test]
    fn full_period_from_random_primitives() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for d in [4usize, 6, 8, 12, 16, 20] {
            let fact = factor_mersenne(d, None).unwrap();
            let f = random_primitive(d, &mut rng, 10_000).unwrap();
            for m in (1..=d).filter(|m| d % m == 0 && *m <= 64) {
                let spec = construct_from_primitive(&f, m, &fact).unwrap();
                let mask = spec.word_mask();
                for _ in 0..3 {
                    let mut words: Vec<u64> =
                        (0..spec.n()).map(|_| rng.gen::<u64>() & mask).collect();
                    if words.iter().all(|&w| w == 0) {
                        words[0] = 1;
                    }
                    assert_eq!(orbit_period(&spec, &words).unwrap(), (1 << d) - 1);
                }
            }
        }
    }

    #[test]
    fn orbits_close_for_nonsingular_specs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..40 {
            let m = rng.gen_range(1..=4);
            let n = rng.gen_range(1..=(12 / m));
            let mask = (1u64 << m) - 1;
            let mut taps: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & mask).collect();
            taps[0] |= 1 << (m - 1); // a_0 = 1 keeps T invertible
            let spec = XorshiftSpec::new(m, taps).unwrap();
            let period = orbit_period(&spec, &vec![1; n]).unwrap();
            let f = spec.to_polynomial();
            assert!(f.coeff(0));
            let mut st = GeneratorState::from_words(vec![1; n]);
            for _ in 0..period {
                step(&spec, &mut st);
            }
            assert_eq!(st.words, vec![1; n]);
        }
    }

    #[test]
    fn tap_count_examples() {
        assert_eq!(
            tap_count(&XorshiftSpec::new(2, vec![0b10, 0b10]).unwrap()),
            3
        );
        assert_eq!(
            tap_count(&XorshiftSpec::new(4, vec![1, 2, 3, 4]).unwrap()),
            5
        );
        assert_eq!(
            tap_count(&XorshiftSpec::new(4, vec![9, 0, 0, 0]).unwrap()),
            2
        );
    }

    #[test]
    fn weakness_example() {
        let fact = factor_mersenne(32, None).unwrap();
        let f = random_primitive(32, &mut ChaCha8Rng::seed_from_u64(32), 10_000).unwrap();
        let spec = construct_from_primitive(&f, 8, &fact).unwrap();
        let r = weakness_trace(&spec, 0x08, 3).unwrap();
        assert_eq!(r.trace, [0, 0, 0, 4, 0, 0, 0, 2, 0, 0, 0, 1]);
        assert!(r.pattern_ok);
        assert!(r.closed_form_output_indexed.holds);
        assert_eq!(r.closed_form_seed_indexed.first_mismatch, Some(3));
        assert_eq!(r.states.len(), 13);
        assert_eq!(r.states[3], [0x08, 0, 0, 0]);
        assert_eq!(r.states[4], [0, 0, 0, 0x04]);
        let table = r.render_table();
        assert!(table.contains("Iteration No."));
        assert!(table.contains("(00, 00, 00, 08)"));
        assert!(table.contains("(04, 00, 00, 00)"));
    }

    #[test]
    fn weakness_rejects_undivisible_seed() {
        let spec = spec_of("degs:4,1,0", 2);
        assert!(matches!(
            weakness_trace(&spec, 0b01, 1),
            Err(Error::NotDivisible { .. })
        ));
        assert!(matches!(
            weakness_trace(&spec, 0b10, 2),
            Err(Error::NotDivisible { .. })
        ));
        assert!(matches!(
            weakness_trace(&spec, 0, 1),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn census_examples() {
        let c = |m: usize, n: usize| census(m, n, &factor_mersenne(m * n, None).unwrap()).unwrap();
        assert_eq!(c(2, 2), BigUint::from(2u32));
        assert_eq!(c(1, 2), BigUint::from(1u32));
        assert_eq!(c(4, 2), BigUint::from(16u32));
        assert_eq!(c(8, 8), BigUint::from(143890337947975680u64));
        assert!(census(2, 3, &factor_mersenne(4, None).unwrap()).is_err());
    }

    #[test]
    fn op_count_examples() {
        assert_eq!(
            op_count_bounds(8, 4, 64),
            OpCountBounds {
                iterations: 8,
                lower: 48,
                upper: 72
            }
        );
        assert_eq!(
            op_count_bounds(8, 4, 0),
            OpCountBounds {
                iterations: 0,
                lower: 0,
                upper: 0
            }
        );
        assert_eq!(op_count_bounds(8, 4, 65).iterations, 9);
        let r = word_size_ratio(512, 8, 1_000_000).unwrap();
        assert!(r.strictly_within(2, 8));
        assert_eq!(r.low.to_string(), "132/65");
        assert!(word_size_ratio(512, 8, 0).is_err());
        assert!(word_size_ratio(24, 16, 10).is_err());
    }
}
