//! C interface to `primroot`.
//!
//! Every function returns a [`PrStatus`]; results go through out-pointers.
//! Objects are opaque handles owned by the caller and released with the
//! matching `*_free`. Strings returned by the library are released with
//! [`pr_string_free`]. After a non-OK status, [`pr_last_error`] describes
//! the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use primroot::certify::{optimize_params, theorem3_certify, Certificate, PSpec, ParamsInput, Verdict};
use primroot::characters::{moment_sum_exact, Character};
use primroot::enclosure::DEFAULT_PRECISION;
use primroot::sieve::{SieveConfig, SieveSpec};
use primroot::{Error, PrimeContext};
use rug::{Integer, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrStatus {
    Ok = 0,
    NullPointer = 1,
    /// Input outside the function's domain (not a prime, bad index, ...).
    Domain = 2,
    /// A named precondition on the parameters fails.
    Parameter = 3,
    InvalidSieve = 4,
    BudgetExceeded = 5,
    Unsupported = 6,
    Parse = 7,
    /// No certificate could be issued.
    NotCertified = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrVerdict {
    Certified = 0,
    Failed = 1,
    Indeterminate = 2,
}

/// A prime with its factored `p − 1` and discrete-log table.
pub struct PrContext(PrimeContext);

/// An issued certificate (any verdict).
pub struct PrCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> PrStatus {
    set_error(&e.to_string());
    match e {
        Error::Domain(_) => PrStatus::Domain,
        Error::Parameter(_) => PrStatus::Parameter,
        Error::Config(_) => PrStatus::InvalidSieve,
        Error::BudgetExceeded(_) => PrStatus::BudgetExceeded,
        Error::UnsupportedRange(_) | Error::Regime(_) => PrStatus::Unsupported,
        Error::Parse(_) => PrStatus::Parse,
        Error::Consistency(_) | Error::Verification(_) => PrStatus::Internal,
    }
}

fn null() -> PrStatus {
    set_error("null pointer argument");
    PrStatus::NullPointer
}

fn guard(f: impl FnOnce() -> PrStatus) -> PrStatus {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        PrStatus::Internal
    })
}

/// Message for the last non-OK status on this thread; empty if none.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn pr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_is_prime(n: u64, out: *mut bool) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        match primroot::ntcore::is_prime(n as u128) {
            Ok(b) => {
                *out = b;
                PrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Least primitive root of the odd prime `p`, by brute force.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_least_primitive_root(p: u64, out: *mut u64) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        if p < 3 || !matches!(primroot::ntcore::is_prime(p as u128), Ok(true)) {
            return fail(Error::Domain(format!("{p} is not an odd prime")));
        }
        match primroot::ntcore::least_primitive_root(p) {
            Ok(g) => {
                *out = g;
                PrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `out` must be valid for writes. On success `*out` owns a new context.
#[no_mangle]
pub unsafe extern "C" fn pr_context_new(p: u64, out: *mut *mut PrContext) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        *out = ptr::null_mut();
        match PrimeContext::new(p) {
            Ok(ctx) => {
                *out = Box::into_raw(Box::new(PrContext(ctx)));
                PrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `ctx` must come from [`pr_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pr_context_free(ctx: *mut PrContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// The primitive root used as discrete-log base.
///
/// # Safety
/// `ctx` must be a live context and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_context_generator(ctx: *const PrContext, out: *mut u64) -> PrStatus {
    if ctx.is_null() || out.is_null() {
        return null();
    }
    *out = (*ctx).0.generator();
    PrStatus::Ok
}

/// `ω(p − 1)`.
///
/// # Safety
/// `ctx` must be a live context and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_context_omega(ctx: *const PrContext, out: *mut usize) -> PrStatus {
    if ctx.is_null() || out.is_null() {
        return null();
    }
    *out = (*ctx).0.omega();
    PrStatus::Ok
}

/// `S = Σ_x |Σ_{n<h} χ_j(x+n)|^{2r}` for the character of index `j`, with an
/// absolute floating-point error bound in `error_bound` (may be null).
///
/// # Safety
/// `ctx` must be a live context; `out` valid for writes; `error_bound` null
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_moment_sum(
    ctx: *const PrContext,
    j: u64,
    h: u64,
    r: u32,
    out: *mut f64,
    error_bound: *mut f64,
) -> PrStatus {
    guard(|| {
        if ctx.is_null() || out.is_null() {
            return null();
        }
        let ctx = &(*ctx).0;
        let res = Character::new(ctx, j).and_then(|chi| moment_sum_exact(ctx, &chi, h, r, true));
        match res {
            Ok(m) => {
                *out = m.value;
                if !error_bound.is_null() {
                    *error_bound = m.error_bound;
                }
                PrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, PrStatus> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        PrStatus::Parse
    })
}

fn parse_rational(s: &str) -> Result<Rational, PrStatus> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    match (num.trim().parse::<Integer>(), den.trim().parse::<Integer>()) {
        (Ok(n), Ok(d)) if d != 0 => Ok(Rational::from((n, d))),
        _ => Err(fail(Error::Parse(format!("bad rational {s:?}")))),
    }
}

/// Evaluates the criterion at a prime `p` with integer `h` and `H` given as
/// a decimal integer or fraction `"a/b"`. `e = 0` means no sieve; otherwise
/// `e` is an even divisor of `p − 1`. `precision` 0 selects the default.
///
/// A certificate is returned for every verdict; query it with
/// [`pr_certificate_verdict`].
///
/// # Safety
/// `big_h` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_certify_exact(
    p: u64,
    r: u32,
    h: u64,
    big_h: *const c_char,
    e: u64,
    precision: u32,
    out: *mut *mut PrCertificate,
) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        *out = ptr::null_mut();
        let big_h = match c_str(big_h).and_then(parse_rational) {
            Ok(q) => q,
            Err(s) => return s,
        };
        let prec = if precision == 0 { DEFAULT_PRECISION } else { precision };
        let res = PSpec::exact(p as u128).and_then(|spec| {
            let sieve = match (&spec, e) {
                (_, 0) => SieveSpec::unsieved(spec.omega()),
                (PSpec::Exact { pm1, .. }, e) => SieveConfig::new(p as u128, pm1, e as u128)?.spec(),
                _ => unreachable!(),
            };
            theorem3_certify(&spec, &sieve, r, &ParamsInput::Exact { h: Integer::from(h), big_h }, prec)
        });
        match res {
            Ok(c) => {
                *out = Box::into_raw(Box::new(PrCertificate(c)));
                PrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Searches parameters for the smallest certified `H` at the prime `p`.
/// Returns [`PrStatus::NotCertified`] (and no handle) when nothing certifies.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_optimize(p: u64, precision: u32, out: *mut *mut PrCertificate) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        *out = ptr::null_mut();
        let prec = if precision == 0 { DEFAULT_PRECISION } else { precision };
        match PSpec::exact(p as u128).and_then(|spec| optimize_params(&spec, prec)) {
            Ok(o) => match o.certificate {
                Some(c) => {
                    *out = Box::into_raw(Box::new(PrCertificate(c)));
                    PrStatus::Ok
                }
                None => {
                    set_error(o.reason.as_deref().unwrap_or("no certificate"));
                    PrStatus::NotCertified
                }
            },
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `cert` must be a live certificate and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_certificate_verdict(cert: *const PrCertificate, out: *mut PrVerdict) -> PrStatus {
    if cert.is_null() || out.is_null() {
        return null();
    }
    *out = match (*cert).0.verdict {
        Verdict::Certified => PrVerdict::Certified,
        Verdict::Failed => PrVerdict::Failed,
        Verdict::Indeterminate => PrVerdict::Indeterminate,
    };
    PrStatus::Ok
}

/// Upper end of the enclosure of `H`, rounded up to a double.
///
/// # Safety
/// `cert` must be a live certificate and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_certificate_h_upper(cert: *const PrCertificate, out: *mut f64) -> PrStatus {
    if cert.is_null() || out.is_null() {
        return null();
    }
    *out = (*cert).0.big_h.hi_f64();
    PrStatus::Ok
}

/// The certificate as JSON. Release the string with [`pr_string_free`].
///
/// # Safety
/// `cert` must be a live certificate and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pr_certificate_to_json(cert: *const PrCertificate, out: *mut *mut c_char) -> PrStatus {
    guard(|| {
        if cert.is_null() || out.is_null() {
            return null();
        }
        *out = ptr::null_mut();
        match serde_json::to_string(&(*cert).0) {
            Ok(s) => {
                *out = CString::new(s).expect("JSON has no NUL").into_raw();
                PrStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                PrStatus::Internal
            }
        }
    })
}

/// # Safety
/// `cert` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pr_certificate_free(cert: *mut PrCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn pr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
