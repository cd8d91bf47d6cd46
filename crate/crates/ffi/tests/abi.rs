use std::ffi::{CStr, CString};
use std::ptr;

use xorshift_gf2_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(xs_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn spec_from(poly: &str, m: usize) -> (XsStatus, *mut XsSpec) {
    let poly = CString::new(poly).unwrap();
    let mut spec = ptr::null_mut();
    let status = unsafe { xs_spec_from_poly(poly.as_ptr(), m, &mut spec) };
    (status, spec)
}

#[test]
fn construct_query_and_free() {
    let (status, spec) = spec_from("degs:4,1,0", 2);
    assert_eq!(status, XsStatus::Ok);
    unsafe {
        assert_eq!(xs_spec_word_size(spec), 2);
        assert_eq!(xs_spec_order(spec), 2);
        assert_eq!(xs_spec_tap_count(spec), 3);
        let mut taps = [0u64; 2];
        assert_eq!(xs_spec_taps(spec, taps.as_mut_ptr(), 2), XsStatus::Ok);
        assert_eq!(taps, [0b10, 0b10]);
        assert_eq!(xs_spec_taps(spec, taps.as_mut_ptr(), 1), XsStatus::Invalid);

        let mut text = ptr::null_mut();
        assert_eq!(xs_spec_to_text(spec, &mut text), XsStatus::Ok);
        assert_eq!(
            CStr::from_ptr(text).to_str().unwrap(),
            "m=2\nn=2\nv0=hex:2\nv1=hex:2\n"
        );

        let mut reparsed = ptr::null_mut();
        assert_eq!(xs_spec_parse(text, &mut reparsed), XsStatus::Ok);
        assert_eq!(xs_spec_tap_count(reparsed), 3);
        xs_string_free(text);
        xs_spec_free(reparsed);

        let mut full = false;
        assert_eq!(xs_spec_verify_full_period(spec, &mut full), XsStatus::Ok);
        assert!(full);
        xs_spec_free(spec);
    }
}

#[test]
fn status_codes_match_the_cli() {
    let (status, spec) = spec_from("degs:4,3,2,1,0", 2);
    assert_eq!(status, XsStatus::NotPrimitive);
    assert!(spec.is_null());
    assert!(last_error().contains("not primitive"));

    assert_eq!(spec_from("nonsense", 2).0, XsStatus::Invalid);
    assert_eq!(spec_from("degs:4,1,0", 3).0, XsStatus::Invalid);

    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            xs_spec_from_poly(ptr::null(), 2, &mut out),
            XsStatus::NullPointer
        );
        assert_eq!(xs_spec_sample(4, 4, 1, 0, 0, &mut out), XsStatus::Invalid);
        // No primitive polynomial has this shape (three taps, four stages).
        assert_eq!(
            xs_spec_sample(4, 4, 3, 1, 50, &mut out),
            XsStatus::Exhausted
        );
        assert_eq!(xs_spec_sample(4, 4, 4, 1, 0, &mut out), XsStatus::Ok);
        assert_eq!(xs_spec_tap_count(out), 4);
        xs_spec_free(out);
        assert_eq!(xs_spec_word_size(ptr::null()), 0);
        xs_spec_free(ptr::null_mut());
        xs_generator_free(ptr::null_mut());
        xs_string_free(ptr::null_mut());
    }
}

#[test]
fn generator_matches_regression_stream() {
    let (_, spec) = spec_from("degs:4,1,0", 2);
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            xs_generator_new(spec, [0u64, 0].as_ptr(), 2, &mut g),
            XsStatus::Invalid
        );
        assert!(last_error().contains("zero"));
        assert_eq!(
            xs_generator_new(spec, [1u64, 1].as_ptr(), 2, &mut g),
            XsStatus::Ok
        );
        // The handle keeps its own copy of the spec.
        xs_spec_free(spec);
        let mut words = [0u64; 8];
        for w in &mut words {
            assert_eq!(xs_generator_next(g, w), XsStatus::Ok);
        }
        assert_eq!(words, [0, 2, 0, 1, 2, 2, 1, 3]);
        xs_generator_free(g);

        let (_, spec) = spec_from("degs:4,1,0", 2);
        assert_eq!(
            xs_generator_new(spec, [1u64, 1].as_ptr(), 2, &mut g),
            XsStatus::Ok
        );
        let mut buf = [0u8; 2];
        assert_eq!(
            xs_generator_fill_bytes(g, buf.as_mut_ptr(), 2),
            XsStatus::Ok
        );
        // Sixteen bits: the 15-bit regression vector plus the top bit of word 8.
        assert_eq!(buf, [0x48, 0xda]);
        xs_generator_free(g);
        xs_spec_free(spec);
    }
}

#[test]
fn census_as_decimal() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(xs_census(4, 2, &mut out), XsStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "16");
        xs_string_free(out);
        assert_eq!(xs_census(8, 8, &mut out), XsStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "143890337947975680");
        xs_string_free(out);
    }
}
