// SPDX-License-Identifier: Apache-2.0

//! C ABI over the `dnflat` verifier.
//!
//! Brackets and coordinate maps are opaque handles created from JSON documents
//! and released with their `_free` function. Every fallible call returns a
//! `DnStatus`; on failure `dn_last_error` describes the problem. Strings
//! returned through out-parameters are owned by the caller and released with
//! `dn_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dnflat::cli::{self, Command, Options};
use dnflat::document::{BracketDocument, LoadedBracket, MapDocument};
use dnflat::jacobi::check_jacobi;
use dnflat::suite::Family;
use dnflat::{CoordinateMap, Error, Report};

/// Result codes of the C interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DnStatus {
    /// Success; for check runs, every check passed.
    Ok = 0,
    /// The run completed and at least one check failed.
    ChecksFailed = 1,
    /// A document or expression could not be parsed or validated.
    InvalidInput = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// The operation does not apply to this bracket or map.
    Precondition = 5,
    /// An unexpected internal failure.
    Internal = 6,
}

/// Connection family selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DnFamily {
    /// The flat combinations `G[s]`.
    Flat = 0,
    /// The standard connections `G(s)`.
    Standard = 1,
}

/// Options for `dn_run`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DnOptions {
    /// Family inspected by `curvature`.
    pub which: DnFamily,
    /// Connection index inspected by `curvature`.
    pub s: u32,
    /// Seed for randomized spot checks.
    pub seed: u64,
    /// Maximal `deg_u` of random monomials in spot checks.
    pub max_degu: u32,
}

/// A loaded bracket.
pub struct DnBracket(LoadedBracket);

/// An invertible coordinate change.
pub struct DnMap(CoordinateMap);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> DnStatus {
    match e {
        Error::Syntax { .. }
        | Error::IndexOutOfRange { .. }
        | Error::NotScalar(_)
        | Error::InvalidBracket(_)
        | Error::NotHomogeneous
        | Error::Schema(_)
        | Error::Input { .. }
        | Error::Io(_)
        | Error::Json(_) => DnStatus::InvalidInput,
        _ => DnStatus::Precondition,
    }
}

struct Failure(DnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Run `f`, translating errors and panics into a status and the last-error text.
fn guard(f: impl FnOnce() -> Result<DnStatus, Failure>) -> DnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            set_error("");
            status
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error");
            DnStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(DnStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DnStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(DnStatus::NullPointer, format!("{what} is null")))
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(DnStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Default options: flat family, `s = 0`, seed 0, `max_degu = 3`.
#[no_mangle]
pub extern "C" fn dn_options_default() -> DnOptions {
    let o = Options::default();
    DnOptions {
        which: DnFamily::Flat,
        s: o.s,
        seed: o.seed,
        max_degu: o.max_degu,
    }
}

/// Parse a bracket document. On success `*out` receives a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_bracket_parse(json: *const c_char, out: *mut *mut DnBracket) -> DnStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = ptr::null_mut();
        let loaded = BracketDocument::parse(text(json, "json")?, "<input>")?;
        *out = Box::into_raw(Box::new(DnBracket(loaded)));
        Ok(DnStatus::Ok)
    })
}

/// Release a bracket handle. Null is ignored.
///
/// # Safety
/// `b` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dn_bracket_free(b: *mut DnBracket) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Number of components `n`, or 0 for a null handle.
///
/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dn_bracket_dim(b: *const DnBracket) -> usize {
    b.as_ref().map_or(0, |b| b.0.bracket.dim())
}

/// Degree `k`, or 0 for a null handle.
///
/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dn_bracket_degree(b: *const DnBracket) -> u32 {
    b.as_ref().map_or(0, |b| b.0.bracket.degree())
}

/// Serialize a bracket as a raw-entry document.
///
/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_bracket_to_json(b: *const DnBracket, out: *mut *mut c_char) -> DnStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = ptr::null_mut();
        let b = handle(b, "bracket")?;
        *out = owned_string(BracketDocument::from_bracket(&b.0.bracket).to_json());
        Ok(DnStatus::Ok)
    })
}

/// Whether the bracket is skew-symmetric and satisfies the Jacobi identity.
///
/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_bracket_is_poisson(b: *const DnBracket, out: *mut bool) -> DnStatus {
    guard(|| {
        check_out(out, "out")?;
        let b = &handle(b, "bracket")?.0.bracket;
        *out = b.check_skew() && check_jacobi(b)?;
        Ok(DnStatus::Ok)
    })
}

/// Parse a coordinate-map document. On success `*out` receives a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_map_parse(json: *const c_char, out: *mut *mut DnMap) -> DnStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = ptr::null_mut();
        let map = MapDocument::parse(text(json, "json")?, "<input>")?;
        *out = Box::into_raw(Box::new(DnMap(map)));
        Ok(DnStatus::Ok)
    })
}

/// Release a map handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dn_map_free(m: *mut DnMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Express a bracket in new coordinates. On success `*out` receives a new handle.
///
/// # Safety
/// `b` and `m` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_bracket_transform(
    b: *const DnBracket,
    m: *const DnMap,
    out: *mut *mut DnBracket,
) -> DnStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = ptr::null_mut();
        let b = handle(b, "bracket")?;
        let m = handle(m, "map")?;
        let bracket = b.0.bracket.transform(&m.0)?;
        let coordinates = (1..=bracket.dim()).map(|i| format!("u{i}")).collect();
        *out = Box::into_raw(Box::new(DnBracket(LoadedBracket {
            bracket,
            coordinates,
            potemin: None,
        })));
        Ok(DnStatus::Ok)
    })
}

/// Run a command (`validate`, `jacobi`, `connections`, `curvature`,
/// `flatness`, `transform`, `lowdegree`, `spectral` or `report`) and write the
/// JSON report to `*report_json`. Returns `Ok` when every check passed and
/// `ChecksFailed` when the report records a failure. `opts` may be null for
/// defaults; `map` is required by `transform` and optional for `report`.
///
/// # Safety
/// `b` must be a live handle, `command` a NUL-terminated string, `opts` and
/// `map` null or valid, and `report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_run(
    b: *const DnBracket,
    command: *const c_char,
    opts: *const DnOptions,
    map: *const DnMap,
    report_json: *mut *mut c_char,
) -> DnStatus {
    guard(|| {
        check_out(report_json, "report_json")?;
        *report_json = ptr::null_mut();
        let b = handle(b, "bracket")?;
        let command: Command = text(command, "command")?.parse()?;
        let raw = opts.as_ref().copied().unwrap_or_else(|| dn_options_default());
        let options = Options {
            which: match raw.which {
                DnFamily::Flat => Family::Flat,
                DnFamily::Standard => Family::Standard,
            },
            s: raw.s,
            map: None,
            seed: raw.seed,
            max_degu: raw.max_degu,
        };
        let map = map.as_ref().map(|m| &m.0);
        let mut report = Report::new(command.name(), "<handle>");
        report.options = options.recorded(command);
        report.extend(cli::checks(command, &b.0, &options, map)?);
        *report_json = owned_string(report.to_json());
        Ok(if report.all_passed() {
            DnStatus::Ok
        } else {
            DnStatus::ChecksFailed
        })
    })
}

/// Description of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
