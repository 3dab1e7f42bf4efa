//! C ABI for `bslope`.
//!
//! Triangulations and slope problems are opaque handles owned by the caller
//! and released with the matching `_free` function. Results come back as
//! JSON strings that must be released with [`bslope_string_free`]. Every
//! function returns a [`BslopeStatus`]; on failure the message is available
//! from [`bslope_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use bslope::data::default_data_dir;
use bslope::families::{Family, FamilySpec};
use bslope::{
    exhaustive_search, DegenerationIndex, EdgeSelector, Error, GluingSystem, PeripheralCurves,
    RowOrder, SearchOptions, SlopeProblem, Triangulation,
};
use serde_json::{json, Value};

/// Status codes. The first four match the exit codes of the command-line tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BslopeStatus {
    Ok = 0,
    InvalidInput = 1,
    Budget = 2,
    Internal = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A parsed triangulation.
pub struct BslopeTriangulation {
    inner: Triangulation,
}

/// An exponent matrix with peripheral curves, ready for evaluation.
pub struct BslopeProblem {
    inner: SlopeProblem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(BslopeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => BslopeStatus::Budget,
            3 => BslopeStatus::Internal,
            _ => BslopeStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes were replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BslopeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            BslopeStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("panic inside bslope");
            BslopeStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for reads.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            BslopeStatus::NullArgument,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(BslopeStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(
            BslopeStatus::NullArgument,
            format!("{what} is null"),
        ))
    } else {
        Ok(())
    }
}

/// # Safety
/// `out` is valid for writes.
unsafe fn write_json(out: *mut *mut c_char, v: &Value) -> Result<(), Failure> {
    let s = serde_json::to_string(v).map_err(|e| Failure(BslopeStatus::Internal, e.to_string()))?;
    *out = CString::new(s).expect("JSON has no NUL bytes").into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next bslope call on this thread.
#[no_mangle]
pub extern "C" fn bslope_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bslope_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a face-gluing table.
///
/// # Safety
/// `text_ptr` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bslope_triangulation_parse(
    text_ptr: *const c_char,
    out: *mut *mut BslopeTriangulation,
) -> BslopeStatus {
    guard(|| {
        non_null(out, "out")?;
        let inner = Triangulation::parse(text(text_ptr, "text")?)?;
        *out = Box::into_raw(Box::new(BslopeTriangulation { inner }));
        Ok(())
    })
}

/// # Safety
/// `tri` is null or a handle from [`bslope_triangulation_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bslope_triangulation_free(tri: *mut BslopeTriangulation) {
    if !tri.is_null() {
        drop(Box::from_raw(tri));
    }
}

/// Number of tetrahedra, or 0 for a null handle.
///
/// # Safety
/// `tri` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bslope_triangulation_tets(tri: *const BslopeTriangulation) -> usize {
    tri.as_ref().map_or(0, |t| t.inner.len())
}

/// Edge classes as `[{"id", "degree", "members": ["3(01)", ...]}, ...]`.
///
/// # Safety
/// `tri` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bslope_triangulation_edges_json(
    tri: *const BslopeTriangulation,
    out: *mut *mut c_char,
) -> BslopeStatus {
    guard(|| {
        non_null(tri, "triangulation")?;
        non_null(out, "out")?;
        let classes = (*tri).inner.edge_classes();
        let rows: Vec<Value> = classes
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "degree": c.degree(),
                    "members": c.members.iter().map(|(t, p)| format!("{t}({p})")).collect::<Vec<_>>(),
                })
            })
            .collect();
        write_json(out, &Value::Array(rows))
    })
}

/// Builds the exponent matrix without the class selected by `omit_edge`
/// (`"tet:pair"` or a class id), rows in first-appearance order, and pairs
/// it with the curves in `curves_text` (`meridian:` and `longitude:` lines).
///
/// # Safety
/// `tri` is a live handle; the strings are NUL-terminated; `out` is valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn bslope_problem_new(
    tri: *const BslopeTriangulation,
    omit_edge: *const c_char,
    curves_text: *const c_char,
    out: *mut *mut BslopeProblem,
) -> BslopeStatus {
    guard(|| {
        non_null(tri, "triangulation")?;
        non_null(out, "out")?;
        let omit: EdgeSelector = text(omit_edge, "omit_edge")?.parse()?;
        let curves = PeripheralCurves::parse(text(curves_text, "curves_text")?)?;
        let (classes, sys) = GluingSystem::from_triangulation(&(*tri).inner);
        let r = sys.build_r(&classes, &omit, &RowOrder::FirstAppearance)?;
        let inner = SlopeProblem::new(r, curves)?;
        *out = Box::into_raw(Box::new(BslopeProblem { inner }));
        Ok(())
    })
}

/// # Safety
/// `problem` is null or a handle from [`bslope_problem_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bslope_problem_free(problem: *mut BslopeProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Evaluates one index over `0`, `1`, `i`. The JSON record carries either a
/// slope or a `status` explaining why none was certified.
///
/// # Safety
/// `problem` is a live handle; `index` is NUL-terminated; `out` is valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn bslope_problem_evaluate(
    problem: *const BslopeProblem,
    index: *const c_char,
    out: *mut *mut c_char,
) -> BslopeStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(out, "out")?;
        let index: DegenerationIndex = text(index, "index")?.parse()?;
        let outcome = (*problem).inner.evaluate(&index)?;
        write_json(out, &outcome.to_json())
    })
}

/// Scans all `3^n` indices. `workers == 0` uses every core. Scans above 18
/// tetrahedra are refused unless `force` is set.
///
/// # Safety
/// `problem` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bslope_problem_search(
    problem: *const BslopeProblem,
    workers: usize,
    prune: bool,
    force: bool,
    out: *mut *mut c_char,
) -> BslopeStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(out, "out")?;
        let options = SearchOptions {
            workers,
            prune,
            force,
            ..SearchOptions::default()
        };
        let report = exhaustive_search(&(*problem).inner, &options)?;
        write_json(out, &report.to_json())
    })
}

/// Member reports for family `"K"` or `"J"` up to `max_n`. `data_dir` may be
/// null to use the default data directory.
///
/// # Safety
/// `family` is NUL-terminated; `data_dir` is null or NUL-terminated; `out`
/// is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bslope_family_report(
    family: *const c_char,
    max_n: usize,
    data_dir: *const c_char,
    out: *mut *mut c_char,
) -> BslopeStatus {
    guard(|| {
        non_null(out, "out")?;
        let family: Family = text(family, "family")?.parse()?;
        let dir = if data_dir.is_null() {
            default_data_dir()
        } else {
            PathBuf::from(text(data_dir, "data_dir")?)
        };
        let spec = FamilySpec::load_from_data_dir(&dir, family)?;
        let reports = spec.report(max_n)?;
        write_json(
            out,
            &Value::Array(reports.iter().map(|r| r.to_json()).collect()),
        )
    })
}
