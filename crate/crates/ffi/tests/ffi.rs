use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use bslope_ffi::*;
use serde_json::Value;

fn data(rel: &str) -> CString {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

unsafe fn take_json(s: *mut c_char) -> Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
    bslope_string_free(s);
    v
}

unsafe fn last_error() -> String {
    let p = bslope_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn k5_problem() -> *mut BslopeProblem {
    let mut tri = ptr::null_mut();
    assert_eq!(
        bslope_triangulation_parse(data("triangulations/K5.tri").as_ptr(), &mut tri),
        BslopeStatus::Ok
    );
    let mut problem = ptr::null_mut();
    let omit = CString::new("2:03").unwrap();
    assert_eq!(
        bslope_problem_new(
            tri,
            omit.as_ptr(),
            data("curves/K5.curves").as_ptr(),
            &mut problem
        ),
        BslopeStatus::Ok
    );
    bslope_triangulation_free(tri);
    problem
}

#[test]
fn k5_slopes_through_the_c_abi() {
    unsafe {
        let problem = k5_problem();
        let mut out = ptr::null_mut();
        let index = CString::new("i000i01100i0iii").unwrap();
        assert_eq!(
            bslope_problem_evaluate(problem, index.as_ptr(), &mut out),
            BslopeStatus::Ok
        );
        let v = take_json(out);
        assert_eq!(v["slope"], "2/5");
        assert_eq!(v["v_mu"], 5);
        assert_eq!(v["v_lambda"], -2);

        let zeros = CString::new("0".repeat(15)).unwrap();
        assert_eq!(
            bslope_problem_evaluate(problem, zeros.as_ptr(), &mut out),
            BslopeStatus::Ok
        );
        assert_eq!(take_json(out)["status"], "not sign-definite");
        bslope_problem_free(problem);
    }
}

#[test]
fn edges_json_counts_classes() {
    unsafe {
        let mut tri = ptr::null_mut();
        assert_eq!(
            bslope_triangulation_parse(data("triangulations/J8.tri").as_ptr(), &mut tri),
            BslopeStatus::Ok
        );
        assert_eq!(bslope_triangulation_tets(tri), 21);
        let mut out = ptr::null_mut();
        assert_eq!(
            bslope_triangulation_edges_json(tri, &mut out),
            BslopeStatus::Ok
        );
        let v = take_json(out);
        let degrees: Vec<u64> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["degree"].as_u64().unwrap())
            .collect();
        assert_eq!(degrees.len(), 21);
        assert_eq!(degrees.iter().sum::<u64>(), 6 * 21);
        assert!(degrees.contains(&11));
        bslope_triangulation_free(tri);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut tri = ptr::null_mut();
        let bad = CString::new("0: 0(013) 0(012) 0(123)\n").unwrap();
        assert_eq!(
            bslope_triangulation_parse(bad.as_ptr(), &mut tri),
            BslopeStatus::InvalidInput
        );
        assert!(tri.is_null());
        assert!(last_error().contains("line 1"));

        assert_eq!(
            bslope_triangulation_parse(ptr::null(), &mut tri),
            BslopeStatus::NullArgument
        );
        assert!(last_error().contains("null"));

        let problem = k5_problem();
        assert!(bslope_last_error().is_null());
        let mut out = ptr::null_mut();
        let short = CString::new("0i1").unwrap();
        assert_eq!(
            bslope_problem_evaluate(problem, short.as_ptr(), &mut out),
            BslopeStatus::InvalidInput
        );
        assert!(out.is_null());
        assert!(last_error().contains("expected length 15"));
        bslope_problem_free(problem);

        assert_eq!(bslope_triangulation_tets(ptr::null()), 0);
        bslope_triangulation_free(ptr::null_mut());
        bslope_string_free(ptr::null_mut());
    }
}

#[test]
fn oversized_search_is_refused_with_the_budget_code() {
    unsafe {
        let mut tri = ptr::null_mut();
        assert_eq!(
            bslope_triangulation_parse(data("triangulations/J8.tri").as_ptr(), &mut tri),
            BslopeStatus::Ok
        );
        let zeros = vec!["0"; 42].join(" ");
        let curves = CString::new(format!("meridian: {zeros}\nlongitude: {zeros}\n")).unwrap();
        let omit = CString::new("4:03").unwrap();
        let mut problem = ptr::null_mut();
        assert_eq!(
            bslope_problem_new(tri, omit.as_ptr(), curves.as_ptr(), &mut problem),
            BslopeStatus::Ok
        );
        let mut out = ptr::null_mut();
        assert_eq!(
            bslope_problem_search(problem, 1, true, false, &mut out),
            BslopeStatus::Budget
        );
        assert!(out.is_null());
        bslope_problem_free(problem);
        bslope_triangulation_free(tri);
    }
}

#[test]
fn family_report_for_small_k() {
    unsafe {
        let mut out = ptr::null_mut();
        let family = CString::new("K").unwrap();
        assert_eq!(
            bslope_family_report(family.as_ptr(), 7, ptr::null(), &mut out),
            BslopeStatus::Ok
        );
        let v = take_json(out);
        assert_eq!(v[1]["slopes"], serde_json::json!(["30/7", "6/1", "0/1"]));
        let odd = CString::new("Q").unwrap();
        assert_eq!(
            bslope_family_report(odd.as_ptr(), 7, ptr::null(), &mut out),
            BslopeStatus::InvalidInput
        );
    }
}

#[test]
fn header_declares_the_api_and_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/bslope.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "bslope_triangulation_parse",
        "bslope_problem_new",
        "bslope_problem_evaluate",
        "bslope_problem_search",
        "bslope_family_report",
        "bslope_last_error",
        "bslope_string_free",
        "BSLOPE_STATUS_BUDGET = 2",
        "typedef struct BslopeProblem BslopeProblem;",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipped the syntax check");
        return;
    };
    assert!(status.success());
}
