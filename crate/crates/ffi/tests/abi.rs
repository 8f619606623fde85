use std::ffi::{CStr, CString};
use std::ptr;

use cfsym_ffi::*;

fn parse(s: &str) -> *mut CfsymDigits {
    let c = CString::new(s).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cfsym_digits_parse(c.as_ptr(), &mut out) }, CfsymStatus::Ok);
    out
}

fn take(s: *mut std::ffi::c_char) -> String {
    let r = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cfsym_string_free(s) };
    r
}

fn last_error() -> String {
    let p = cfsym_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn worked_example() {
    let d = parse("3,1,4");
    unsafe {
        assert_eq!(cfsym_digits_len(d), 3);
        let mut s = ptr::null_mut();
        assert_eq!(cfsym_digits_to_string(d, &mut s), CfsymStatus::Ok);
        assert_eq!(take(s), "(3,1,4)");
        assert_eq!(cfsym_eval(d, &mut s), CfsymStatus::Ok);
        assert_eq!(take(s), "5/19");
        assert_eq!(cfsym_chi(d, &mut s), CfsymStatus::Ok);
        assert_eq!(take(s), "552");
        assert_eq!(cfsym_pgk_exact(d, &mut s), CfsymStatus::Ok);
        assert_eq!(take(s), "log2(552/551)");
        let mut chi = 0u64;
        assert_eq!(cfsym_chi_u64(d, &mut chi), CfsymStatus::Ok);
        assert_eq!(chi, 552);
        let mut p = 0f64;
        assert_eq!(cfsym_pgk(d, 53, &mut p), CfsymStatus::Ok);
        assert!((p - (552f64 / 551.0).log2()).abs() < 1e-15);
        let mut n = 99usize;
        assert_eq!(cfsym_symmetry_count(d, 10, &mut n), CfsymStatus::Ok);
        assert_eq!(n, 0);
        cfsym_digits_free(d);
    }
}

#[test]
fn from_words_and_equality() {
    let words = [4u64, 1, 3];
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(cfsym_digits_new(words.as_ptr(), 3, &mut d), CfsymStatus::Ok);
        let e = parse("3,1,4");
        let f = parse("1,3,4");
        let mut eq = false;
        assert_eq!(cfsym_measure_equal(d, e, &mut eq), CfsymStatus::Ok);
        assert!(eq);
        assert_eq!(cfsym_measure_equal(d, f, &mut eq), CfsymStatus::Ok);
        assert!(!eq);
        for h in [d, e, f] {
            cfsym_digits_free(h);
        }
    }
}

#[test]
fn a_plus_and_errors() {
    let a = parse("1,2");
    let (mut p, mut s) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(cfsym_a_plus(a, &mut p, &mut s), CfsymStatus::Ok);
        let mut t = ptr::null_mut();
        cfsym_digits_to_string(p, &mut t);
        assert_eq!(take(t), "(2,1,1,3)");
        cfsym_digits_to_string(s, &mut t);
        assert_eq!(take(t), "(2,3,1,1)");
        cfsym_digits_free(p);
        cfsym_digits_free(s);
        cfsym_digits_free(a);

        let b = parse("1,2,3");
        assert_eq!(cfsym_a_plus(b, &mut p, &mut s), CfsymStatus::NotStable);
        assert!(last_error().contains("not stable"));
        cfsym_digits_free(b);

        let bad = CString::new("3,0,4").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(cfsym_digits_parse(bad.as_ptr(), &mut out), CfsymStatus::InvalidArgument);
        assert!(out.is_null());
        assert!(last_error().contains("zero"));
        assert_eq!(cfsym_digits_parse(ptr::null(), &mut out), CfsymStatus::NullPointer);
        let mut chi = 0u64;
        assert_eq!(cfsym_chi_u64(ptr::null(), &mut chi), CfsymStatus::NullPointer);

        let big = parse("1000000,1000000,1000000,1000000");
        assert_eq!(cfsym_chi_u64(big, &mut chi), CfsymStatus::Overflow);
        cfsym_digits_free(big);
        cfsym_digits_free(ptr::null_mut());
        cfsym_string_free(ptr::null_mut());
    }
}

#[test]
fn census_rows() {
    let points = [10u64, 20];
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(cfsym_census_run(4, 20, points.as_ptr(), 2, 2, false, &mut c), CfsymStatus::Ok);
        assert_eq!(cfsym_census_len(c), 2);
        let mut row = CfsymCensusRow::default();
        assert_eq!(cfsym_census_row(c, 0, &mut row), CfsymStatus::Ok);
        assert_eq!((row.n, row.big_n, row.total, row.f), (4, 10, 210, 10));
        assert_eq!(cfsym_census_row(c, 1, &mut row), CfsymStatus::Ok);
        assert_eq!(row.f, 30);
        assert_eq!(cfsym_census_row(c, 2, &mut row), CfsymStatus::InvalidArgument);
        cfsym_census_free(c);

        assert_eq!(cfsym_census_run(2, 20, ptr::null(), 0, 1, false, &mut c), CfsymStatus::InvalidArgument);
    }
}

#[test]
fn montecarlo_is_seeded() {
    let t = parse("1");
    let (mut a, mut b) = (CfsymMonteCarlo::default(), CfsymMonteCarlo::default());
    unsafe {
        assert_eq!(cfsym_montecarlo(t, 5000, 20, 3, 1, &mut a), CfsymStatus::Ok);
        assert_eq!(cfsym_montecarlo(t, 5000, 20, 3, 2, &mut b), CfsymStatus::Ok);
        cfsym_digits_free(t);
    }
    assert_eq!(a, b);
    assert!((a.frequency - a.expected).abs() < 0.02);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(cfsym_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
