//! C ABI over `spheridir`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_from_*`
//! functions and released with the matching `*_free`. Structured data
//! (polynomials, tables, reports) crosses as UTF-8 JSON. Every fallible call
//! returns a [`SpheridirStatus`]; on failure the message is available from
//! [`spheridir_last_error_message`] on the same thread. Strings returned
//! through `char **` out-parameters are owned by the caller and released with
//! [`spheridir_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spheridir::dirichlet::{verify_richter, VectorPolynomialSpec};
use spheridir::measures::{Measure, MeasureSpec};
use spheridir::moment::{check_conditions, forward_moments, miso_kernel};
use spheridir::poisson::McConfig;
use spheridir::spaces::SpaceInput;
use spheridir::table::{GramTable, TableKind, TableWire};
use spheridir::tuples::{TruncatedTuple, TupleWire, Verdict};
use spheridir::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpheridirStatus {
    Ok = 0,
    InvalidInput = 1,
    DimensionMismatch = 2,
    Domain = 3,
    Precondition = 4,
    Quadrature = 5,
    Window = 6,
    NotPsd = 7,
    Parse = 8,
    Io = 9,
    NullPointer = 10,
    Utf8 = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpheridirVerdict {
    Isometry = 0,
    Concave = 1,
    Convex = 2,
    Neither = 3,
    Inconclusive = 4,
}

impl From<Verdict> for SpheridirVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Isometry => SpheridirVerdict::Isometry,
            Verdict::Concave => SpheridirVerdict::Concave,
            Verdict::Convex => SpheridirVerdict::Convex,
            Verdict::Neither => SpheridirVerdict::Neither,
            Verdict::Inconclusive => SpheridirVerdict::Inconclusive,
        }
    }
}

/// A boundary measure on the unit sphere.
pub struct SpheridirMeasure {
    inner: Measure,
}

/// A truncated commuting tuple with its Gram table.
pub struct SpheridirTuple {
    inner: TruncatedTuple,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SpheridirStatus {
    match e {
        Error::InvalidInput(_) => SpheridirStatus::InvalidInput,
        Error::DimensionMismatch { .. } => SpheridirStatus::DimensionMismatch,
        Error::Domain(_) => SpheridirStatus::Domain,
        Error::Precondition(_) => SpheridirStatus::Precondition,
        Error::Quadrature(_) => SpheridirStatus::Quadrature,
        Error::Window(_) => SpheridirStatus::Window,
        Error::NotPsd(_) => SpheridirStatus::NotPsd,
        Error::Parse(_) | Error::Json(_) => SpheridirStatus::Parse,
        Error::Io(_) => SpheridirStatus::Io,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Utf8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Lib(Error::Json(e))
    }
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SpheridirStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SpheridirStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SpheridirStatus::NullPointer
        }
        Ok(Err(Failure::Utf8)) => {
            set_error("string is not valid UTF-8".into());
            SpheridirStatus::Utf8
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            SpheridirStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Utf8)
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure::Utf8)?;
    out.write(c.into_raw());
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on this thread; do not free.
#[no_mangle]
pub extern "C" fn spheridir_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn spheridir_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn spheridir_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a measure from its JSON descriptor, e.g.
/// `{"type":"lambda_c","d":2,"lambda":"1","c":["0","0"]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_measure_from_json(json: *const c_char, out: *mut *mut SpheridirMeasure) -> SpheridirStatus {
    guard(|| {
        let spec: MeasureSpec = serde_json::from_str(read_str(json, "json")?)?;
        let m = Box::new(SpheridirMeasure { inner: spec.build()? });
        put(out, Box::into_raw(m), "out")
    })
}

/// # Safety
/// `m` must come from [`spheridir_measure_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn spheridir_measure_free(m: *mut SpheridirMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_measure_dim(m: *const SpheridirMeasure, out: *mut usize) -> SpheridirStatus {
    guard(|| put(out, handle(m, "measure")?.inner.dim(), "out"))
}

/// Moment table `∫ζ^α ζ̄^β dμ` for `|α|, |β| ≤ degree`, as table JSON.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_measure_moments_json(
    m: *const SpheridirMeasure,
    degree: u32,
    out: *mut *mut c_char,
) -> SpheridirStatus {
    guard(|| {
        let phi = forward_moments(&handle(m, "measure")?.inner, degree);
        put_string(out, phi.to_json())
    })
}

/// Richter's identity for polynomials `p`, `q` (JSON,
/// `{"d":2,"terms":[{"alpha":[1,0],"coeff":["1"]}]}`) and order `k`. Writes
/// the report JSON to `report` and whether it passed to `pass`.
///
/// # Safety
/// All pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn spheridir_verify_richter(
    m: *const SpheridirMeasure,
    p_json: *const c_char,
    q_json: *const c_char,
    k: u32,
    samples: u64,
    seed: u64,
    report: *mut *mut c_char,
    pass: *mut bool,
) -> SpheridirStatus {
    guard(|| {
        let mu = &handle(m, "measure")?.inner;
        let p = serde_json::from_str::<VectorPolynomialSpec>(read_str(p_json, "p")?)?.build()?;
        let q = serde_json::from_str::<VectorPolynomialSpec>(read_str(q_json, "q")?)?.build()?;
        let r = verify_richter(&p, &q, mu, k, &McConfig::new(samples, seed))?;
        if pass.is_null() {
            return Err(Failure::Null("pass"));
        }
        put_string(report, serde_json::to_string(&r)?)?;
        pass.write(r.pass);
        Ok(())
    })
}

/// Multiplication tuple on the truncation of a space given as JSON, e.g.
/// `{"type":"hp","d":2,"p":"1"}`, with degree bound `degree`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_tuple_from_space_json(
    json: *const c_char,
    degree: u32,
    out: *mut *mut SpheridirTuple,
) -> SpheridirStatus {
    guard(|| {
        let spec = serde_json::from_str::<SpaceInput>(read_str(json, "json")?)?.build()?;
        let t = Box::new(SpheridirTuple {
            inner: TruncatedTuple::from_space(&spec, degree)?,
        });
        put(out, Box::into_raw(t), "out")
    })
}

/// Tuple from its wire form: a Gram table and sparse operator triplets.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_tuple_from_json(json: *const c_char, out: *mut *mut SpheridirTuple) -> SpheridirStatus {
    guard(|| {
        let wire: TupleWire = serde_json::from_str(read_str(json, "json")?)?;
        let t = Box::new(SpheridirTuple {
            inner: TruncatedTuple::from_wire(&wire)?,
        });
        put(out, Box::into_raw(t), "out")
    })
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_tuple_to_json(t: *const SpheridirTuple, out: *mut *mut c_char) -> SpheridirStatus {
    guard(|| {
        let s = serde_json::to_string(&handle(t, "tuple")?.inner.to_wire())?;
        put_string(out, s)
    })
}

/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn spheridir_tuple_free(t: *mut SpheridirTuple) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// m-isometry verdict on the largest window the truncation supports.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_tuple_classify(t: *const SpheridirTuple, m: u32, out: *mut SpheridirVerdict) -> SpheridirStatus {
    guard(|| {
        let c = handle(t, "tuple")?.inner.classify(m)?;
        put(out, c.verdict.into(), "out")
    })
}

/// Moment table of an m-isometry, as table JSON.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_tuple_moment_kernel_json(
    t: *const SpheridirTuple,
    m: u32,
    out: *mut *mut c_char,
) -> SpheridirStatus {
    guard(|| {
        let phi = miso_kernel(&handle(t, "tuple")?.inner, m)?;
        put_string(out, phi.to_json())
    })
}

/// Positivity and spherical Toeplitz checks of a moment table given as JSON.
/// Writes a JSON object with the fields `psd`, `rank`, `min_eigenvalue`,
/// `toeplitz` and `toeplitz_residual`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spheridir_moment_check_json(json: *const c_char, out: *mut *mut c_char) -> SpheridirStatus {
    guard(|| {
        let wire: TableWire = serde_json::from_str(read_str(json, "json")?)?;
        let mut phi = GramTable::from_wire(&wire)?;
        if wire.kind.is_none() {
            phi = phi.with_kind(TableKind::Moment);
        }
        put_string(out, serde_json::to_string(&check_conditions(&phi)?)?)
    })
}

/// Runs a command-line invocation (`argv[0]` is the program name) and
/// returns its exit code: 0 pass, 1 verification failure, 2 input error.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn spheridir_cli_run(argc: usize, argv: *const *const c_char) -> i32 {
    let args: Option<Vec<String>> = (0..argc)
        .map(|i| {
            let p = *argv.add(i);
            (!p.is_null()).then(|| CStr::from_ptr(p).to_string_lossy().into_owned())
        })
        .collect();
    match args {
        Some(a) if !argv.is_null() => catch_unwind(|| spheridir::cli::main_with_args(a)).unwrap_or(spheridir::cli::EXIT_INPUT),
        _ => spheridir::cli::EXIT_INPUT,
    }
}
