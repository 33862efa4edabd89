//! C interface to `selfsim`.
//!
//! Systems and maps are opaque handles created from JSON documents (the
//! same formats the command line reads) and released with the matching
//! `_free` function. Results come back as JSON strings owned by the caller
//! and released with [`sf_string_free`]. Every function returns an
//! [`SfStatus`]; on failure [`sf_last_error`] describes what went wrong.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;

use selfsim::chains::{chain_decomposition, chain_level};
use selfsim::embedding::{
    certify_embedding, log_commensurability, openness_decision, OpennessError, OpennessOptions,
    SearchBudget,
};
use selfsim::rational::parse_rational;
use selfsim::ssc::{check_ssc, SscResult};
use selfsim::symmetry::{symmetry_decision, SymmetryOutcome};
use selfsim::{io, report, Error, Ifs, Similitude};

/// Outcome codes; the values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    Refuted = 1,
    Unknown = 2,
    Precondition = 3,
    Counterevidence = 4,
    InvalidArgument = 64,
    NullPointer = 65,
    Panic = 70,
}

/// An iterated function system.
pub struct SfIfs {
    inner: Ifs,
}

/// A single similitude.
pub struct SfMap {
    inner: Similitude,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(SfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => SfStatus::InvalidArgument,
            Error::BoundsTooLoose(_) => SfStatus::Unknown,
            _ => SfStatus::Precondition,
        };
        Fail(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<SfStatus, Fail>) -> SfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(SfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SfStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(SfStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_json(out: *mut *mut c_char, value: &Value) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(SfStatus::NullPointer, "output pointer is null".into()));
    }
    let s = CString::new(value.to_string()).expect("JSON has no nul bytes");
    *out = s.into_raw();
    Ok(())
}

/// Parses an IFS document. On success `*out` receives a handle to release
/// with `sf_ifs_free`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_ifs_from_json(json: *const c_char, out: *mut *mut SfIfs) -> SfStatus {
    guard(|| {
        let json = text(json, "json")?;
        if out.is_null() {
            return Err(Fail(SfStatus::NullPointer, "out is null".into()));
        }
        let inner =
            io::parse_ifs(json).map_err(|e| Fail(SfStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(SfIfs { inner }));
        Ok(SfStatus::Ok)
    })
}

/// # Safety
/// `ifs` must come from `sf_ifs_from_json` and not be freed twice; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_ifs_free(ifs: *mut SfIfs) {
    if !ifs.is_null() {
        drop(Box::from_raw(ifs));
    }
}

/// Number of maps, or 0 for a null handle.
///
/// # Safety
/// `ifs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_ifs_len(ifs: *const SfIfs) -> usize {
    ifs.as_ref().map_or(0, |i| i.inner.len())
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `ifs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_ifs_dim(ifs: *const SfIfs) -> usize {
    ifs.as_ref().map_or(0, |i| i.inner.dim())
}

/// Parses a single-map document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_map_from_json(json: *const c_char, out: *mut *mut SfMap) -> SfStatus {
    guard(|| {
        let json = text(json, "json")?;
        if out.is_null() {
            return Err(Fail(SfStatus::NullPointer, "out is null".into()));
        }
        let inner =
            io::parse_map(json).map_err(|e| Fail(SfStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(SfMap { inner }));
        Ok(SfStatus::Ok)
    })
}

/// # Safety
/// `map` must come from `sf_map_from_json` and not be freed twice; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_map_free(map: *mut SfMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Strong separation: `SF_STATUS_OK` certified, `SF_STATUS_REFUTED`
/// violated, `SF_STATUS_UNKNOWN` undecided at `depth`.
///
/// # Safety
/// `ifs` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_check_ssc(
    ifs: *const SfIfs,
    depth: usize,
    out_json: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let ifs = handle(ifs, "ifs")?;
        let result = check_ssc(&ifs.inner, depth);
        write_json(out_json, &report::ssc_json(&result))?;
        Ok(match result {
            SscResult::Certified { .. } => SfStatus::Ok,
            SscResult::Violated { .. } => SfStatus::Refuted,
            SscResult::Unknown { .. } => SfStatus::Unknown,
        })
    })
}

/// Chain decomposition at the chain level.
///
/// # Safety
/// `ifs` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_chains(
    ifs: *const SfIfs,
    depth: usize,
    out_json: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let ifs = &handle(ifs, "ifs")?.inner;
        let n = chain_level(ifs, depth)?;
        let cs = chain_decomposition(ifs, n, depth)?;
        write_json(out_json, &report::chains_json(&cs))?;
        Ok(SfStatus::Ok)
    })
}

fn budget(max_word_len: usize) -> SearchBudget {
    SearchBudget {
        max_word_len,
        ..SearchBudget::default()
    }
}

/// Embedding certificate for `map`, as a certificate document.
/// `SF_STATUS_UNKNOWN` when the search budget runs out.
///
/// # Safety
/// Handles must be live and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_certify_embedding(
    ifs: *const SfIfs,
    map: *const SfMap,
    max_word_len: usize,
    out_json: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let ifs = &handle(ifs, "ifs")?.inner;
        let f = &handle(map, "map")?.inner;
        match certify_embedding(f, ifs, &[], budget(max_word_len)) {
            Some(cert) => {
                write_json(out_json, &report::certificate_json(&cert))?;
                Ok(SfStatus::Ok)
            }
            None => Err(Fail(
                SfStatus::Unknown,
                "no certificate within budget".into(),
            )),
        }
    })
}

/// Openness decision; searches its own embedding certificate.
///
/// # Safety
/// Handles must be live and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_openness(
    ifs: *const SfIfs,
    map: *const SfMap,
    depth: usize,
    max_word_len: usize,
    out_json: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let ifs = &handle(ifs, "ifs")?.inner;
        let f = &handle(map, "map")?.inner;
        let cert = certify_embedding(f, ifs, &[], budget(max_word_len)).ok_or_else(|| {
            Fail(
                SfStatus::Unknown,
                "no embedding certificate within budget".into(),
            )
        })?;
        let options = OpennessOptions {
            depth,
            budget: budget(max_word_len),
            ..OpennessOptions::default()
        };
        match openness_decision(f, ifs, &cert, &options) {
            Ok(c) => {
                write_json(out_json, &report::openness_json(&c))?;
                Ok(SfStatus::Ok)
            }
            Err(e) => {
                let status = match e {
                    OpennessError::NotHomogeneousOrthogonal(_)
                    | OpennessError::NotSeparated(_)
                    | OpennessError::InvalidEvidence(_) => SfStatus::Precondition,
                    OpennessError::Unknown(_) => SfStatus::Unknown,
                    OpennessError::Inconsistent(_) => SfStatus::Refuted,
                    OpennessError::Core(inner) => return Err(inner.into()),
                };
                Err(Fail(status, e.to_string()))
            }
        }
    })
}

/// Minimal `(k, p)` with `rf^k = r^p`; `SF_STATUS_REFUTED` when the
/// logarithms are incommensurable. Ratios are `"p/q"` strings.
///
/// # Safety
/// Strings must be nul-terminated; `k` and `p` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sf_commensurability(
    r: *const c_char,
    rf: *const c_char,
    k: *mut u64,
    p: *mut u64,
) -> SfStatus {
    guard(|| {
        let r = parse_rational(text(r, "r")?)?;
        let rf = parse_rational(text(rf, "rf")?)?;
        if k.is_null() || p.is_null() {
            return Err(Fail(SfStatus::NullPointer, "k or p is null".into()));
        }
        match log_commensurability(&r, &rf)? {
            Some(rel) => {
                *k = rel.k;
                *p = rel.p;
                Ok(SfStatus::Ok)
            }
            None => Ok(SfStatus::Refuted),
        }
    })
}

/// Symmetry decision for a problem document `{"phi": ..., "psi": ...}`.
/// `SF_STATUS_COUNTEREVIDENCE` comes with the failed check in the JSON.
///
/// # Safety
/// `problem_json` must be nul-terminated and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_symmetry(
    problem_json: *const c_char,
    depth: usize,
    max_word_len: usize,
    out_json: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let problem = io::parse_problem(text(problem_json, "problem_json")?)?;
        let outcome = symmetry_decision(&problem, depth, budget(max_word_len))?;
        write_json(out_json, &report::symmetry_json(&outcome))?;
        Ok(match outcome {
            SymmetryOutcome::Symmetric(_) => SfStatus::Ok,
            SymmetryOutcome::Counterevidence(_) => SfStatus::Counterevidence,
            SymmetryOutcome::Unknown(_) => SfStatus::Unknown,
        })
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
