//! Word-oriented runtime.
//!
//! One step computes the feedback word
//! `fb = (s_0 >> 1) ^ XOR{ v_i : LSB(s_i) = 1 }`, shifts every stage down by
//! one (`s_i <- s_{i+1}`) and stores `fb` in the newest stage. The emitted
//! output word is `fb` itself.

use std::convert::Infallible;

use crate::construct::{BitMatrix, XorshiftSpec};
use crate::error::{Error, Result};

/// Stage words, oldest (`s_0`) first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorState {
    pub words: Vec<u64>,
    pub step_count: u64,
}

impl GeneratorState {
    /// Wraps raw words without any validation.
    pub fn from_words(words: Vec<u64>) -> Self {
        GeneratorState {
            words,
            step_count: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Flattens into an `mn`-bit vector: stage 0 first, and inside a stage
    /// the first vector component (the word's MSB) first.
    pub fn to_bits(&self, m: usize) -> Vec<u64> {
        let dim = m * self.words.len();
        let mut bits = vec![0u64; dim.div_ceil(64).max(1)];
        for (s, &w) in self.words.iter().enumerate() {
            for t in 0..m {
                if (w >> (m - 1 - t)) & 1 == 1 {
                    let k = s * m + t;
                    bits[k / 64] |= 1u64 << (k % 64);
                }
            }
        }
        bits
    }

    pub fn from_bits(bits: &[u64], m: usize, n: usize) -> Self {
        let words = (0..n)
            .map(|s| {
                (0..m).fold(0u64, |w, t| {
                    let k = s * m + t;
                    if (bits[k / 64] >> (k % 64)) & 1 == 1 {
                        w | 1u64 << (m - 1 - t)
                    } else {
                        w
                    }
                })
            })
            .collect();
        Self::from_words(words)
    }
}

/// How much the seed protects against the even-seed degeneration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedQuality {
    /// At least one word is odd.
    Good,
    /// Every word is divisible by `2^l`, `l` maximal.
    Degraded(u32),
}

/// Validates a seed and reports its quality. All-zero seeds are refused
/// because the zero state is a fixed point.
pub fn seed(spec: &XorshiftSpec, words: &[u64]) -> Result<(GeneratorState, SeedQuality)> {
    if words.len() != spec.n() {
        return Err(Error::SeedLength {
            expected: spec.n(),
            found: words.len(),
        });
    }
    let mask = spec.word_mask();
    if let Some(&w) = words.iter().find(|&&w| w & !mask != 0) {
        return Err(Error::WordOverflow {
            word: w,
            m: spec.m(),
        });
    }
    let l = words
        .iter()
        .filter(|&&w| w != 0)
        .map(|w| w.trailing_zeros())
        .min()
        .ok_or(Error::ZeroSeed)?;
    let quality = if l == 0 {
        SeedQuality::Good
    } else {
        SeedQuality::Degraded(l)
    };
    Ok((GeneratorState::from_words(words.to_vec()), quality))
}

/// Hook for counting word operations inside [`step_with`].
pub trait OpTally {
    fn shift(&mut self) {}
    /// One XOR of a tap word; `active` when the stage's LSB selected it.
    fn xor(&mut self, _active: bool) {}
    fn stage_move(&mut self) {}
}

/// No-op tally; compiles away.
pub struct NoTally;
impl OpTally for NoTally {}

/// Counts the word operations performed per the feedback cost model.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounter {
    pub shifts: u64,
    pub xors: u64,
    /// XORs whose selector bit was 1, i.e. the ones that changed `fb`.
    pub active_xors: u64,
    pub stage_moves: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.shifts + self.xors + self.stage_moves
    }

    /// The right shift plus every XOR that actually contributed.
    pub fn active_terms(&self) -> u64 {
        self.shifts + self.active_xors
    }
}

impl OpTally for OpCounter {
    fn shift(&mut self) {
        self.shifts += 1;
    }
    fn xor(&mut self, active: bool) {
        self.xors += 1;
        if active {
            self.active_xors += 1;
        }
    }
    fn stage_move(&mut self) {
        self.stage_moves += 1;
    }
}

/// One generator step; returns the new feedback word.
#[inline]
pub fn step(spec: &XorshiftSpec, state: &mut GeneratorState) -> u64 {
    step_with(spec, state, &mut NoTally)
}

/// [`step`] with operation counting.
#[inline]
pub fn step_with<T: OpTally>(
    spec: &XorshiftSpec,
    state: &mut GeneratorState,
    tally: &mut T,
) -> u64 {
    let s = &mut state.words;
    let mut fb = s[0] >> 1;
    tally.shift();
    for &(i, v) in spec.active_taps() {
        let select = s[i] & 1;
        fb ^= v & select.wrapping_neg();
        tally.xor(select == 1);
    }
    let n = s.len();
    s.copy_within(1.., 0);
    s[n - 1] = fb;
    for _ in 0..n {
        tally.stage_move();
    }
    state.step_count += 1;
    fb
}

/// Applies `T` to the flattened state. Independent of the tap shortcut in
/// [`step`].
pub fn step_dense(t: &BitMatrix, m: usize, state: &GeneratorState) -> Result<GeneratorState> {
    let n = state.words.len();
    if t.dim() != m * n {
        return Err(Error::DimensionMismatch {
            expected: m * n,
            found: t.dim(),
        });
    }
    let next = t.mul_vec(&state.to_bits(m))?;
    let mut out = GeneratorState::from_bits(&next, m, n);
    out.step_count = state.step_count + 1;
    Ok(out)
}

/// Runs `ceil(nbits / m)` steps and packs the output words into a bit
/// stream: each word contributes its `m` bits LSB first, bytes are filled
/// LSB first, and the result is cut to `ceil(nbits / 8)` bytes with any bits
/// past `nbits` cleared. For `m` a multiple of 8 this is each word written
/// as little-endian bytes.
pub fn generate_stream(spec: &XorshiftSpec, state: &mut GeneratorState, nbits: u64) -> Vec<u8> {
    let mut out = Vec::with_capacity(nbits.div_ceil(8) as usize);
    write_stream(spec, state, nbits, |chunk| {
        out.extend_from_slice(chunk);
        Ok::<(), Infallible>(())
    })
    .unwrap_or_else(|never| match never {});
    out
}

/// Streaming form of [`generate_stream`]; `sink` receives the bytes in
/// order, in chunks. The first error from `sink` stops generation and is
/// returned, leaving `state` wherever the stream stopped.
pub fn write_stream<E, F: FnMut(&[u8]) -> std::result::Result<(), E>>(
    spec: &XorshiftSpec,
    state: &mut GeneratorState,
    nbits: u64,
    mut sink: F,
) -> std::result::Result<(), E> {
    const CHUNK: usize = 1 << 14;
    let m = spec.m() as u64;
    let steps = nbits.div_ceil(m);
    let nbytes = nbits.div_ceil(8);
    let mut buf: Vec<u8> = Vec::with_capacity(CHUNK + 8);
    let mut emitted: u64 = 0;
    let mut acc: u128 = 0;
    let mut filled: u64 = 0;

    for _ in 0..steps {
        // filled < 64 and m <= 64, so the accumulator never overflows.
        acc |= (step(spec, state) as u128) << filled;
        filled += m;
        if filled >= 64 {
            buf.extend_from_slice(&(acc as u64).to_le_bytes());
            acc >>= 64;
            filled -= 64;
        }
        if buf.len() >= CHUNK {
            // Hold back a tail longer than one word so the byte that may
            // need truncation is never flushed early.
            let take = buf.len() - 16;
            sink(&buf[..take])?;
            buf.drain(..take);
            emitted += take as u64;
        }
    }
    while filled > 0 {
        buf.push(acc as u8);
        acc >>= 8;
        filled = filled.saturating_sub(8);
    }
    // Every step adds m fresh bits, so at most one partial word overshoots.
    buf.truncate((nbytes - emitted) as usize);
    if !nbits.is_multiple_of(8) {
        if let Some(last) = buf.last_mut() {
            *last &= (1u8 << (nbits % 8)) - 1;
        }
    }
    if !buf.is_empty() {
        sink(&buf)?;
    }
    Ok(())
}
