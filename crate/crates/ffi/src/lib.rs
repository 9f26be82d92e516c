//! C bindings for the berktrees library.
//!
//! Conventions:
//!
//! - Every fallible call returns a [`BtStatus`]; `BT_STATUS_OK` is zero.
//!   Out-parameters are written only on success.
//! - Strings returned by the library are heap-allocated, NUL-terminated
//!   UTF-8 and must be released with [`bt_string_free`]. Handles must be
//!   released with their matching `*_free` function; all `free` functions
//!   accept null.
//! - After any failure, [`bt_last_error_message`] describes the most
//!   recent problem on the calling thread.
//! - Precision and budget arguments count orders of `t`; passing zero or
//!   a negative value selects the library default (24).

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::ToPrimitive;

use berktrees::berkline::TypeIIPoint;
use berktrees::cli::parser;
use berktrees::cli::run_job;
use berktrees::error::Error;
use berktrees::exact::{rat_int, rat_to_string, Rat};
use berktrees::puiseux::{PuiseuxSeries, Valuation, DEFAULT_PRECISION};
use berktrees::ratmap::RationalMapL;

/// Outcome of a library call. Zero means success; every other value
/// corresponds to one failure mode and comes with a message retrievable
/// through [`bt_last_error_message`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An exact value does not fit the requested numeric out-parameter.
    Unrepresentable = 3,
    /// The library panicked; this is a bug in the library.
    Panic = 4,
    /// More working precision is needed; retry with a larger budget.
    PrecisionExhausted = 10,
    DivisionByZero = 11,
    NotDistinct = 12,
    SamePoint = 13,
    TripleNotSeparated = 14,
    /// The answer cannot be certified at the working precision.
    Indeterminate = 15,
    ConstantReduction = 16,
    PortraitInvalid = 17,
    FamilyIncompatible = 18,
    VertexImageMissing = 19,
    NotCompatible = 20,
    MarkingMismatch = 21,
    /// Parse error; the message names the byte offset.
    Syntax = 22,
    /// Malformed job input (missing keys, bad shapes, bad values).
    Job = 23,
}

/// Opaque handle to a truncated Puiseux series.
pub struct BtSeries(PuiseuxSeries);

/// Opaque handle to a type-II point of the Berkovich line, stored as its
/// canonical ball.
pub struct BtPoint(TypeIIPoint);

/// Opaque handle to a rational map over the Puiseux series field.
pub struct BtMap(RationalMapL);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: BtStatus, message: &str) -> BtStatus {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
    status
}

fn fail_with(e: &Error) -> BtStatus {
    let status = match e {
        Error::PrecisionExhausted(_) => BtStatus::PrecisionExhausted,
        Error::DivisionByZero(_) => BtStatus::DivisionByZero,
        Error::NotDistinct(_) => BtStatus::NotDistinct,
        Error::SamePoint(_) => BtStatus::SamePoint,
        Error::TripleNotSeparated(_) => BtStatus::TripleNotSeparated,
        Error::Indeterminate(_) => BtStatus::Indeterminate,
        Error::ConstantReduction(_) => BtStatus::ConstantReduction,
        Error::PortraitInvalid(_) => BtStatus::PortraitInvalid,
        Error::FamilyIncompatible(_) => BtStatus::FamilyIncompatible,
        Error::VertexImageMissing(_) => BtStatus::VertexImageMissing,
        Error::NotCompatible(_) => BtStatus::NotCompatible,
        Error::MarkingMismatch(_) => BtStatus::MarkingMismatch,
        Error::Syntax { .. } => BtStatus::Syntax,
        Error::Job(_) => BtStatus::Job,
    };
    fail(status, &e.to_string())
}

fn guarded(body: impl FnOnce() -> BtStatus) -> BtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(BtStatus::Panic, "internal panic; please report this"),
    }
}

/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BtStatus> {
    if ptr.is_null() {
        return Err(fail(BtStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(BtStatus::InvalidUtf8, "string argument is not valid UTF-8"))
}

unsafe fn deref<'a, T>(ptr: *const T) -> Result<&'a T, BtStatus> {
    if ptr.is_null() {
        return Err(fail(BtStatus::NullArgument, "null handle argument"));
    }
    Ok(&*ptr)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> BtStatus {
    if out.is_null() {
        return fail(BtStatus::NullArgument, "null out-parameter");
    }
    *out = Box::into_raw(Box::new(value));
    BtStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> BtStatus {
    if out.is_null() {
        return fail(BtStatus::NullArgument, "null out-parameter");
    }
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            BtStatus::Ok
        }
        Err(_) => fail(BtStatus::Unrepresentable, "text contains a NUL byte"),
    }
}

unsafe fn put_rat(r: &Rat, out_num: *mut i64, out_den: *mut i64) -> BtStatus {
    if out_num.is_null() || out_den.is_null() {
        return fail(BtStatus::NullArgument, "null out-parameter");
    }
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => {
            *out_num = n;
            *out_den = d;
            BtStatus::Ok
        }
        _ => fail(
            BtStatus::Unrepresentable,
            "exact rational does not fit in 64 bits",
        ),
    }
}

fn orders(requested: i64) -> Rat {
    rat_int(if requested > 0 {
        requested
    } else {
        DEFAULT_PRECISION
    })
}

/// Library version as a static NUL-terminated string. Never freed.
#[no_mangle]
pub extern "C" fn bt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on the calling thread, or null if
/// nothing failed yet. The pointer stays valid until the next failing
/// call on the same thread; copy it if you need to keep it.
#[no_mangle]
pub extern "C" fn bt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        if msg.as_bytes().is_empty() {
            std::ptr::null()
        } else {
            msg.as_ptr()
        }
    })
}

/// Release a string returned by the library. Accepts null.
///
/// # Safety
/// `s` must be null or a pointer previously returned by a `bt_*` function
/// that hands out strings, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a series from its textual form (for example `"1 - t^1/2 + O(t^3)"`).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_series_parse(text: *const c_char, out: *mut *mut BtSeries) -> BtStatus {
    guarded(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parser::parse_series(text) {
            Ok(series) => put(out, BtSeries(series)),
            Err(e) => fail_with(&e),
        }
    })
}

/// Print a series in the same grammar [`bt_series_parse`] accepts.
/// Returns null only on a null handle or internal failure.
///
/// # Safety
/// `series` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bt_series_print(series: *const BtSeries) -> *mut c_char {
    match catch_unwind(AssertUnwindSafe(|| {
        let series = match deref(series) {
            Ok(s) => s,
            Err(_) => return std::ptr::null_mut(),
        };
        CString::new(series.0.to_string())
            .map(CString::into_raw)
            .unwrap_or(std::ptr::null_mut())
    })) {
        Ok(ptr) => ptr,
        Err(_) => {
            fail(BtStatus::Panic, "internal panic; please report this");
            std::ptr::null_mut()
        }
    }
}

/// Sum of two series.
///
/// # Safety
/// `a` and `b` must be live series handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_series_add(
    a: *const BtSeries,
    b: *const BtSeries,
    out: *mut *mut BtSeries,
) -> BtStatus {
    guarded(|| match (deref(a), deref(b)) {
        (Ok(a), Ok(b)) => put(out, BtSeries(a.0.add(&b.0))),
        (Err(s), _) | (_, Err(s)) => s,
    })
}

/// Product of two series.
///
/// # Safety
/// `a` and `b` must be live series handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_series_mul(
    a: *const BtSeries,
    b: *const BtSeries,
    out: *mut *mut BtSeries,
) -> BtStatus {
    guarded(|| match (deref(a), deref(b)) {
        (Ok(a), Ok(b)) => put(out, BtSeries(a.0.mul(&b.0))),
        (Err(s), _) | (_, Err(s)) => s,
    })
}

/// Quotient of two series. `window` bounds the relative precision of a
/// non-terminating expansion; zero or negative selects the default.
///
/// # Safety
/// `a` and `b` must be live series handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_series_div(
    a: *const BtSeries,
    b: *const BtSeries,
    window: i64,
    out: *mut *mut BtSeries,
) -> BtStatus {
    guarded(|| match (deref(a), deref(b)) {
        (Ok(a), Ok(b)) => match a.0.divide(&b.0, &orders(window)) {
            Ok(q) => put(out, BtSeries(q)),
            Err(e) => fail_with(&e),
        },
        (Err(s), _) | (_, Err(s)) => s,
    })
}

/// Valuation (least exponent) of a series as an exact fraction.
/// `*out_is_finite` is false — with the fraction zeroed — for the zero
/// series; a valuation that is only known modulo the working precision
/// reports `BT_STATUS_PRECISION_EXHAUSTED`.
///
/// # Safety
/// `series` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bt_series_valuation(
    series: *const BtSeries,
    out_num: *mut i64,
    out_den: *mut i64,
    out_is_finite: *mut bool,
) -> BtStatus {
    guarded(|| {
        let series = match deref(series) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if out_is_finite.is_null() {
            return fail(BtStatus::NullArgument, "null out-parameter");
        }
        match series.0.val() {
            Valuation::Finite(v) => {
                let status = put_rat(&v, out_num, out_den);
                if status == BtStatus::Ok {
                    *out_is_finite = true;
                }
                status
            }
            Valuation::Infinite => {
                let status = put_rat(&Rat::default(), out_num, out_den);
                if status == BtStatus::Ok {
                    *out_is_finite = false;
                }
                status
            }
            Valuation::ZeroModPrecision(c) => fail(
                BtStatus::PrecisionExhausted,
                &format!(
                    "series vanishes modulo t^{}; its valuation is uncertified",
                    rat_to_string(&c)
                ),
            ),
        }
    })
}

/// Release a series handle. Accepts null.
///
/// # Safety
/// `series` must be null or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bt_series_free(series: *mut BtSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Parse a type-II point written as `"<center; radius>"`, for example
/// `"<1 + t; 3/2>"`. The stored ball is canonical: parsing `"<1 + t^3; 2>"`
/// yields the same handle content as `"<1; 2>"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_point_parse(text: *const c_char, out: *mut *mut BtPoint) -> BtStatus {
    guarded(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parser::parse_typeii(text) {
            Ok(point) => put(out, BtPoint(point)),
            Err(e) => fail_with(&e),
        }
    })
}

/// The Gauss point `<0; 0>`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_point_gauss(out: *mut *mut BtPoint) -> BtStatus {
    guarded(|| put(out, BtPoint(TypeIIPoint::gauss())))
}

/// Print a point in the same form [`bt_point_parse`] accepts.
/// Returns null only on a null handle or internal failure.
///
/// # Safety
/// `point` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bt_point_print(point: *const BtPoint) -> *mut c_char {
    match catch_unwind(AssertUnwindSafe(|| {
        let point = match deref(point) {
            Ok(p) => p,
            Err(_) => return std::ptr::null_mut(),
        };
        CString::new(point.0.to_string())
            .map(CString::into_raw)
            .unwrap_or(std::ptr::null_mut())
    })) {
        Ok(ptr) => ptr,
        Err(_) => {
            fail(BtStatus::Panic, "internal panic; please report this");
            std::ptr::null_mut()
        }
    }
}

/// Whether two points are equal. Because stored balls are canonical this
/// is plain structural equality. Null handles compare unequal.
///
/// # Safety
/// `a` and `b` must each be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_point_eq(a: *const BtPoint, b: *const BtPoint) -> bool {
    match (deref(a), deref(b)) {
        (Ok(a), Ok(b)) => a.0 == b.0,
        _ => false,
    }
}

/// Radius parameter of a point, as the exact valuation of its radius.
///
/// # Safety
/// `point` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bt_point_radius(
    point: *const BtPoint,
    out_num: *mut i64,
    out_den: *mut i64,
) -> BtStatus {
    guarded(|| match deref(point) {
        Ok(p) => put_rat(p.0.rv(), out_num, out_den),
        Err(s) => s,
    })
}

/// Release a point handle. Accepts null.
///
/// # Safety
/// `point` must be null or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bt_point_free(point: *mut BtPoint) {
    if !point.is_null() {
        drop(Box::from_raw(point));
    }
}

/// Parse a rational map from numerator and denominator polynomials in
/// `z`, for example `"t*z^2 + 1"` and `"z"`. Fails with
/// `BT_STATUS_INDETERMINATE` when coprimality of the two polynomials
/// cannot be certified at the working precision.
///
/// # Safety
/// `num` and `den` must be NUL-terminated strings; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_map_parse(
    num: *const c_char,
    den: *const c_char,
    out: *mut *mut BtMap,
) -> BtStatus {
    guarded(|| {
        let num = match read_str(num) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let den = match read_str(den) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let build = || -> Result<RationalMapL, Error> {
            RationalMapL::new(parser::parse_map_poly(num)?, parser::parse_map_poly(den)?)
        };
        match build() {
            Ok(map) => put(out, BtMap(map)),
            Err(e) => fail_with(&e),
        }
    })
}

/// Print a map as `numerator/denominator` in the variable `z`.
/// Returns null only on a null handle or internal failure.
///
/// # Safety
/// `map` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bt_map_print(map: *const BtMap) -> *mut c_char {
    match catch_unwind(AssertUnwindSafe(|| {
        let map = match deref(map) {
            Ok(m) => m,
            Err(_) => return std::ptr::null_mut(),
        };
        CString::new(map.0.display_with_var("z"))
            .map(CString::into_raw)
            .unwrap_or(std::ptr::null_mut())
    })) {
        Ok(ptr) => ptr,
        Err(_) => {
            fail(BtStatus::Panic, "internal panic; please report this");
            std::ptr::null_mut()
        }
    }
}

/// Degree of a map, or -1 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_map_degree(map: *const BtMap) -> i64 {
    match deref(map) {
        Ok(m) => m.0.degree() as i64,
        Err(_) => -1,
    }
}

/// Image of a type-II point under a map. `budget` bounds the searched
/// exponent range; zero or negative selects the default.
///
/// # Safety
/// `map` and `point` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_map_image(
    map: *const BtMap,
    point: *const BtPoint,
    budget: i64,
    out: *mut *mut BtPoint,
) -> BtStatus {
    guarded(|| match (deref(map), deref(point)) {
        (Ok(m), Ok(p)) => match m.0.image_typeii(&p.0, &orders(budget)) {
            Ok(image) => put(out, BtPoint(image)),
            Err(e) => fail_with(&e),
        },
        (Err(s), _) | (_, Err(s)) => s,
    })
}

/// Reduction of a map to the residue sphere at the Gauss point, printed
/// as a rational function of `u`.
///
/// # Safety
/// `map` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_map_reduction(map: *const BtMap, out: *mut *mut c_char) -> BtStatus {
    guarded(|| match deref(map) {
        Ok(m) => match m.0.reduce_map() {
            Ok(reduced) => put_string(out, reduced.map.to_string()),
            Err(e) => fail_with(&e),
        },
        Err(s) => s,
    })
}

/// Tangent map of `map` at `v` toward `w`, printed as a rational function
/// of `u`. Fails with `BT_STATUS_CONSTANT_REDUCTION` when `w` is not the
/// image of `v`.
///
/// # Safety
/// `map`, `v`, and `w` must be live handles; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_map_tangent(
    map: *const BtMap,
    v: *const BtPoint,
    w: *const BtPoint,
    out: *mut *mut c_char,
) -> BtStatus {
    guarded(|| match (deref(map), deref(v), deref(w)) {
        (Ok(m), Ok(v), Ok(w)) => match m.0.tangent_map(&v.0, &w.0) {
            Ok(tangent) => put_string(out, tangent.to_string()),
            Err(e) => fail_with(&e),
        },
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => s,
    })
}

/// Release a map handle. Accepts null.
///
/// # Safety
/// `map` must be null or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bt_map_free(map: *mut BtMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Run one job and return its JSON report, exactly as the CLI would print
/// it. `kind` is a subcommand name (`tree`, `cover`, `verify`,
/// `rescalings`, `orbit`, `reduce`, `eval`); `job_json` holds the job
/// object itself rather than a file path. `precision` counts orders of
/// `t`; zero or negative selects the default.
///
/// # Safety
/// `kind` and `job_json` must be NUL-terminated strings; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_run_job(
    kind: *const c_char,
    job_json: *const c_char,
    precision: i64,
    out: *mut *mut c_char,
) -> BtStatus {
    guarded(|| {
        let kind = match read_str(kind) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let job_json = match read_str(job_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let precision = if precision > 0 {
            precision
        } else {
            DEFAULT_PRECISION
        };
        match run_job(kind, job_json, precision) {
            Ok(report) => put_string(out, report),
            Err(e) => fail_with(&e),
        }
    })
}
