//! C ABI for `cfsym`.
//!
//! Digit strings and census results cross the boundary as opaque handles
//! that the caller releases with the matching `*_free` function. Every
//! fallible call returns a [`CfsymStatus`]; on failure a message is
//! available from [`cfsym_last_error`] on the same thread. Strings returned
//! through `char **` out-parameters are owned by the caller and released
//! with [`cfsym_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cfsym::census::{self, CensusConfig, CensusRow};
use cfsym::lab::{self, MonteCarloConfig};
use cfsym::{families, symmetry, DigitString, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfsymStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    NotStable = 4,
    SizeLimit = 5,
    Overflow = 6,
    VerificationFailed = 7,
    Io = 8,
    Panic = 9,
}

/// An immutable string of positive continued-fraction digits.
pub struct CfsymDigits(DigitString);

/// Rows of a completed census run.
pub struct CfsymCensus(Vec<CensusRow>);

/// One census row. `total` saturates at `UINT64_MAX`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CfsymCensusRow {
    pub n: u32,
    pub big_n: u64,
    pub total: u64,
    pub f: u64,
    pub delta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CfsymMonteCarlo {
    pub hits: u64,
    pub windows: u64,
    pub frequency: f64,
    pub expected: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CfsymStatus {
    match e {
        Error::NotStable { .. } => CfsymStatus::NotStable,
        Error::SizeLimit { .. } => CfsymStatus::SizeLimit,
        Error::VerificationFailed(_) => CfsymStatus::VerificationFailed,
        Error::Io(_) | Error::Checkpoint(_) => CfsymStatus::Io,
        _ => CfsymStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), (CfsymStatus, String)>) -> CfsymStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfsymStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CfsymStatus::Panic
        }
    }
}

type Fallible<T> = Result<T, (CfsymStatus, String)>;

fn lib<T>(r: cfsym::Result<T>) -> Fallible<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CfsymStatus, String) {
    (CfsymStatus::NullPointer, format!("{what} is null"))
}

unsafe fn digits<'a>(p: *const CfsymDigits, what: &str) -> Fallible<&'a DigitString> {
    p.as_ref().map(|d| &d.0).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Fallible<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed(d: DigitString) -> *mut CfsymDigits {
    Box::into_raw(Box::new(CfsymDigits(d)))
}

fn owned_c(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cfsym_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn cfsym_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cfsym_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses comma-separated digits such as `"3,1,4"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_digits_parse(text: *const c_char, out: *mut *mut CfsymDigits) -> CfsymStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (CfsymStatus::InvalidUtf8, "text is not UTF-8".to_string()))?;
        let d = lib(s.parse::<DigitString>())?;
        put(out, boxed(d), "out")
    })
}

/// Builds a digit string from `len` machine words.
///
/// # Safety
/// `digits` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_digits_new(digits: *const u64, len: usize, out: *mut *mut CfsymDigits) -> CfsymStatus {
    guard(|| {
        if digits.is_null() && len > 0 {
            return Err(null("digits"));
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(digits, len) };
        let d = lib(DigitString::from_u64s(slice))?;
        put(out, boxed(d), "out")
    })
}

/// # Safety
/// `d` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cfsym_digits_free(d: *mut CfsymDigits) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of digits, or 0 for null.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfsym_digits_len(d: *const CfsymDigits) -> usize {
    d.as_ref().map_or(0, |d| d.0.len())
}

/// Text form `(a1,...,an)`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_digits_to_string(d: *const CfsymDigits, out: *mut *mut c_char) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        put(out, owned_c(d.to_string()), "out")
    })
}

/// Exact value `p/q` as text.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_eval(d: *const CfsymDigits, out: *mut *mut c_char) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        put(out, owned_c(cfsym::evaluate(d).to_string()), "out")
    })
}

/// Characteristic number in decimal.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_chi(d: *const CfsymDigits, out: *mut *mut c_char) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        put(out, owned_c(cfsym::chi(d).value.to_string()), "out")
    })
}

/// Characteristic number as a machine word; `Overflow` when it does not fit.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_chi_u64(d: *const CfsymDigits, out: *mut u64) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        let c = cfsym::chi(d).value;
        let v = u64::try_from(&c).map_err(|_| (CfsymStatus::Overflow, format!("chi = {c} exceeds 64 bits")))?;
        put(out, v, "out")
    })
}

/// Frequency rounded to `precision_bits` significand bits (1..=53).
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_pgk(d: *const CfsymDigits, precision_bits: u32, out: *mut f64) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        put(out, lib(cfsym::pgk_float(d, precision_bits))?, "out")
    })
}

/// Exact frequency as `log2(num/den)`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_pgk_exact(d: *const CfsymDigits, out: *mut *mut c_char) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        put(out, owned_c(cfsym::pgk_exact(d).to_string()), "out")
    })
}

/// Whether two strings have the same Gauss-Kuzmin frequency.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_measure_equal(
    a: *const CfsymDigits,
    b: *const CfsymDigits,
    out: *mut bool,
) -> CfsymStatus {
    guard(|| {
        let (a, b) = (digits(a, "a")?, digits(b, "b")?);
        put(out, cfsym::measure_equal(a, b), "out")
    })
}

/// Number of nontrivial symmetries (distinct permutations other than the
/// string and its reversal with the same frequency).
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_symmetry_count(d: *const CfsymDigits, max_len: usize, out: *mut usize) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        let n = lib(symmetry::nontrivial_symmetries(d, max_len))?.len();
        put(out, n, "out")
    })
}

/// `a+` and its symmetry for a stable string; `NotStable` otherwise.
///
/// # Safety
/// `d` must be a live handle; `plus` and `sigma` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_a_plus(
    d: *const CfsymDigits,
    plus: *mut *mut CfsymDigits,
    sigma: *mut *mut CfsymDigits,
) -> CfsymStatus {
    guard(|| {
        let d = digits(d, "digits")?;
        if plus.is_null() || sigma.is_null() {
            return Err(null("plus or sigma"));
        }
        let (p, s) = lib(families::a_plus(d))?;
        put(plus, boxed(p), "plus")?;
        put(sigma, boxed(s), "sigma")
    })
}

/// Census of exceptional `n`-subsets of `{1..n_max}` at the given report
/// points (all multiples of 10 or 5 plus `n_max` when `points` is null).
/// `workers = 0` uses every core.
///
/// # Safety
/// `points` must be null or point to `npoints` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_census_run(
    n: u32,
    n_max: u64,
    points: *const u64,
    npoints: usize,
    workers: usize,
    force: bool,
    out: *mut *mut CfsymCensus,
) -> CfsymStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = CensusConfig::new(n as usize, n_max);
        if !points.is_null() {
            cfg.report_points = std::slice::from_raw_parts(points, npoints).to_vec();
        }
        if workers > 0 {
            cfg.workers = workers;
        }
        cfg.force = force;
        let rows = lib(census::census(&cfg))?;
        put(out, Box::into_raw(Box::new(CfsymCensus(rows))), "out")
    })
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfsym_census_len(c: *const CfsymCensus) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_census_row(c: *const CfsymCensus, index: usize, out: *mut CfsymCensusRow) -> CfsymStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("census"))?;
        let r = c.0.get(index).ok_or_else(|| {
            (CfsymStatus::InvalidArgument, format!("row {index} out of range (len {})", c.0.len()))
        })?;
        let row = CfsymCensusRow {
            n: r.n as u32,
            big_n: r.big_n,
            total: u64::try_from(r.total).unwrap_or(u64::MAX),
            f: r.f,
            delta: r.delta_f64(),
        };
        put(out, row, "out")
    })
}

/// # Safety
/// `c` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cfsym_census_free(c: *mut CfsymCensus) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Seeded Monte Carlo frequency of `target`. `workers = 0` uses every core;
/// the counts do not depend on it.
///
/// # Safety
/// `target` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsym_montecarlo(
    target: *const CfsymDigits,
    samples: u64,
    digits_per_sample: usize,
    seed: u64,
    workers: usize,
    out: *mut CfsymMonteCarlo,
) -> CfsymStatus {
    guard(|| {
        let t = digits(target, "target")?;
        let mut cfg = MonteCarloConfig::new(samples, digits_per_sample, seed);
        if workers > 0 {
            cfg.workers = workers;
        }
        let r = lib(lab::montecarlo_frequency(t, &cfg))?;
        let res = CfsymMonteCarlo { hits: r.hits, windows: r.windows, frequency: r.frequency, expected: r.expected };
        put(out, res, "out")
    })
}
