//! C ABI over `xorshift-gf2`.
//!
//! Every fallible call returns an [`XsStatus`] and writes its result through
//! an out-pointer. On failure a description is available from
//! [`xs_last_error`] on the same thread until the next failing call.
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xorshift_gf2::construct::default_max_attempts;
use xorshift_gf2::{
    census, construct_from_primitive, factor_mersenne, generate_stream, sample_k_tap, seed, step,
    tap_count, verify_full_period, Error, GeneratorState, Gf2Poly, XorshiftSpec,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XsStatus {
    Ok = 0,
    /// Malformed input, out-of-range parameter or parse failure.
    Invalid = 1,
    NotPrimitive = 2,
    NoFactorization = 3,
    Exhausted = 4,
    Internal = 5,
    NullPointer = 6,
}

/// A validated generator description.
pub struct XsSpec(XorshiftSpec);

/// A running generator. It owns a copy of its spec.
pub struct XsGenerator {
    spec: XorshiftSpec,
    state: GeneratorState,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> XsStatus {
    match err {
        Error::NotPrimitive(_) => XsStatus::NotPrimitive,
        Error::FactorizationUnavailable { .. } => XsStatus::NoFactorization,
        Error::AttemptsExhausted { .. } => XsStatus::Exhausted,
        _ => XsStatus::Invalid,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (XsStatus, String)>) -> XsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => XsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            XsStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (XsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (XsStatus, String) {
    (XsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (XsStatus, String)> {
    if p.is_null() {
        return Err(null_err(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (XsStatus::Invalid, format!("{what} is not UTF-8")))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn xs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a spec from a primitive polynomial written as `hex:...` or
/// `degs:...`, split into words of `word_size` bits.
///
/// # Safety
/// `poly` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_from_poly(
    poly: *const c_char,
    word_size: size_t,
    out: *mut *mut XsSpec,
) -> XsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let f = Gf2Poly::parse_text(read_str(poly, "poly")?).map_err(lib_err)?;
        let fact = factor_mersenne(f.degree(), None).map_err(lib_err)?;
        let spec = construct_from_primitive(&f, word_size, &fact).map_err(lib_err)?;
        *out = boxed(XsSpec(spec));
        Ok(())
    })
}

/// Parses the `m=`/`n=`/`vI=` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_parse(text: *const c_char, out: *mut *mut XsSpec) -> XsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let spec = XorshiftSpec::parse_text(read_str(text, "text")?).map_err(lib_err)?;
        *out = boxed(XsSpec(spec));
        Ok(())
    })
}

/// Searches for a primitive spec with exactly `k` xorshift operations.
/// `max_attempts == 0` selects the default budget of `64 * m * n`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_sample(
    m: size_t,
    n: size_t,
    k: size_t,
    search_seed: u64,
    max_attempts: size_t,
    out: *mut *mut XsSpec,
) -> XsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let fact = factor_mersenne(m * n, None).map_err(lib_err)?;
        let attempts = if max_attempts == 0 {
            default_max_attempts(m, n)
        } else {
            max_attempts
        };
        let mut rng = ChaCha8Rng::seed_from_u64(search_seed);
        let s = sample_k_tap(m, n, k, &mut rng, &fact, attempts).map_err(lib_err)?;
        *out = boxed(XsSpec(s.spec));
        Ok(())
    })
}

/// # Safety
/// `spec` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_free(spec: *mut XsSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Word size `m`, or 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_word_size(spec: *const XsSpec) -> size_t {
    spec.as_ref().map_or(0, |s| s.0.m())
}

/// Number of stages `n`, or 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_order(spec: *const XsSpec) -> size_t {
    spec.as_ref().map_or(0, |s| s.0.n())
}

/// Right shift plus one XOR per nonzero tap word, or 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_tap_count(spec: *const XsSpec) -> size_t {
    spec.as_ref().map_or(0, |s| tap_count(&s.0))
}

/// Copies the `n` tap words into `taps`, which must hold `len >= n` words.
///
/// # Safety
/// `spec` must be a live handle and `taps` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_taps(
    spec: *const XsSpec,
    taps: *mut u64,
    len: size_t,
) -> XsStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null_err("spec"))?;
        if taps.is_null() {
            return Err(null_err("taps"));
        }
        let words = spec.0.taps();
        if len < words.len() {
            return Err((
                XsStatus::Invalid,
                format!("buffer holds {len} words, spec has {}", words.len()),
            ));
        }
        ptr::copy_nonoverlapping(words.as_ptr(), taps, words.len());
        Ok(())
    })
}

/// Serializes the spec; release the string with [`xs_string_free`].
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_to_text(spec: *const XsSpec, out: *mut *mut c_char) -> XsStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null_err("spec"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let text =
            CString::new(spec.0.to_text()).map_err(|e| (XsStatus::Internal, e.to_string()))?;
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes whether the spec has period `2^{mn} - 1`.
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_spec_verify_full_period(
    spec: *const XsSpec,
    out: *mut bool,
) -> XsStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null_err("spec"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let d = spec.0.m() * spec.0.n();
        let fact = factor_mersenne(d, None).map_err(lib_err)?;
        *out = verify_full_period(&spec.0, &fact).map_err(lib_err)?;
        Ok(())
    })
}

/// Starts a generator from `len == n` seed words, oldest stage first.
/// The all-zero seed is rejected.
///
/// # Safety
/// `spec` must be a live handle, `seed_words` valid for `len` reads and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_generator_new(
    spec: *const XsSpec,
    seed_words: *const u64,
    len: size_t,
    out: *mut *mut XsGenerator,
) -> XsStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null_err("spec"))?;
        if seed_words.is_null() {
            return Err(null_err("seed_words"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let words = std::slice::from_raw_parts(seed_words, len);
        let (state, _) = seed(&spec.0, words).map_err(lib_err)?;
        *out = boxed(XsGenerator {
            spec: spec.0.clone(),
            state,
        });
        Ok(())
    })
}

/// Advances one step and writes the `m`-bit output word.
///
/// # Safety
/// `generator` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_generator_next(generator: *mut XsGenerator, out: *mut u64) -> XsStatus {
    guard(|| {
        let g = generator.as_mut().ok_or_else(|| null_err("generator"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = step(&g.spec, &mut g.state);
        Ok(())
    })
}

/// Fills `buf` with the next `8 * len` bits of the packed output stream.
/// Each call starts on a fresh word, so splitting a fill into several calls
/// yields the same bytes only when `m` is a multiple of 8.
///
/// # Safety
/// `generator` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn xs_generator_fill_bytes(
    generator: *mut XsGenerator,
    buf: *mut u8,
    len: size_t,
) -> XsStatus {
    guard(|| {
        let g = generator.as_mut().ok_or_else(|| null_err("generator"))?;
        if len == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null_err("buf"));
        }
        let bytes = generate_stream(&g.spec, &mut g.state, 8 * len as u64);
        ptr::copy_nonoverlapping(bytes.as_ptr(), buf, len);
        Ok(())
    })
}

/// # Safety
/// `generator` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xs_generator_free(generator: *mut XsGenerator) {
    if !generator.is_null() {
        drop(Box::from_raw(generator));
    }
}

/// Number of full-period generators of order `n` over `GF(2^m)`, as a
/// decimal string; release it with [`xs_string_free`].
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn xs_census(m: size_t, n: size_t, out: *mut *mut c_char) -> XsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let fact = factor_mersenne(m * n, None).map_err(lib_err)?;
        let count = census(m, n, &fact).map_err(lib_err)?;
        *out = CString::new(count.to_string())
            .map_err(|e| (XsStatus::Internal, e.to_string()))?
            .into_raw();
        Ok(())
    })
}
