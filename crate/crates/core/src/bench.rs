//! Throughput comparison of one degree-`mn` polynomial split across several
//! word sizes.
//!
//! The polynomial is drawn deterministically with `a_0 = a_mn = 1` and is not
//! checked for primitivity: the cost per step depends only on the shape of
//! the taps, so timing a generator of unverified period is fine.

use std::convert::Infallible;
use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::{build_tap_vectors, XorshiftSpec};
use crate::error::{Error, Result};
use crate::generator::{write_stream, GeneratorState};
use crate::gf2poly::Gf2Poly;

const BENCH_POLY_SEED: u64 = 0x6266_3262_656e_6368;

#[derive(Debug, Clone)]
pub struct BenchResult {
    pub m: usize,
    pub n: usize,
    pub bits: u64,
    /// Median over the repetitions.
    pub elapsed: Duration,
    /// Elapsed time of the previous (narrower) word size divided by this
    /// one; `None` for the first row or when either time is zero.
    pub ratio_to_previous: Option<f64>,
}

/// Deterministic degree-`d` polynomial with both end coefficients set.
pub fn bench_polynomial(d: usize) -> Gf2Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_POLY_SEED ^ d as u64);
    let mut f = Gf2Poly::zero();
    for i in 1..d {
        if rng.gen::<bool>() {
            f.set_coeff(i, true);
        }
    }
    f.set_coeff(0, true);
    f.set_coeff(d, true);
    f
}

fn bench_seed(spec: &XorshiftSpec) -> GeneratorState {
    let mask = spec.word_mask();
    let words = (0..spec.n() as u64)
        .map(|i| (i.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1) & mask)
        .collect();
    GeneratorState::from_words(words)
}

pub fn run_bench(
    mn: usize,
    word_sizes: &[usize],
    bits: u64,
    repetitions: usize,
) -> Result<Vec<BenchResult>> {
    if repetitions == 0 {
        return Err(Error::InvalidSpec("repetitions must be positive".into()));
    }
    let f = bench_polynomial(mn);
    let specs = word_sizes
        .iter()
        .map(|&m| build_tap_vectors(&f, m))
        .collect::<Result<Vec<_>>>()?;

    let mut results: Vec<BenchResult> = Vec::with_capacity(specs.len());
    for spec in &specs {
        let mut samples = Vec::with_capacity(repetitions);
        for _ in 0..repetitions {
            let mut state = bench_seed(spec);
            let start = Instant::now();
            let _ = write_stream(spec, &mut state, bits, |chunk| {
                black_box(chunk);
                Ok::<(), Infallible>(())
            });
            samples.push(start.elapsed());
            black_box(&state);
        }
        samples.sort();
        // Nothing was generated, so there is nothing to time.
        let elapsed = if bits == 0 {
            Duration::ZERO
        } else {
            samples[samples.len() / 2]
        };
        let ratio_to_previous = results.last().and_then(|prev| {
            (!prev.elapsed.is_zero() && !elapsed.is_zero())
                .then(|| prev.elapsed.as_secs_f64() / elapsed.as_secs_f64())
        });
        results.push(BenchResult {
            m: spec.m(),
            n: spec.n(),
            bits,
            elapsed,
            ratio_to_previous,
        });
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_polynomial_is_deterministic_and_full_degree() {
        let f = bench_polynomial(64);
        assert_eq!(f, bench_polynomial(64));
        assert_eq!(f.degree(), 64);
        assert!(f.coeff(0));
    }

    #[test]
    fn zero_bits_still_reports_every_word_size() {
        let r = run_bench(16, &[4, 8], 0, 1).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].m, r[0].n, r[1].m, r[1].n), (4, 4, 8, 2));
        assert!(r
            .iter()
            .all(|b| b.elapsed.is_zero() && b.ratio_to_previous.is_none()));
    }

    #[test]
    fn rejects_bad_word_size() {
        assert!(matches!(
            run_bench(16, &[3], 10, 1),
            Err(Error::WordSizeDoesNotDivide { .. })
        ));
        assert!(run_bench(16, &[4], 10, 0).is_err());
    }
}
