use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use symdyn_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(p: *mut std::ffi::c_char) -> serde_json::Value {
    assert!(!p.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(p) }.to_str().unwrap()).unwrap();
    unsafe { symdyn_string_free(p) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(symdyn_last_error()) }.to_string_lossy().into_owned()
}

fn space(json: &str) -> *mut SymdynSpace {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { symdyn_space_from_json(c(json).as_ptr(), &mut out) }, SymdynStatus::Ok);
    out
}

fn system(space: *const SymdynSpace, json: &str) -> *mut SymdynSystem {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { symdyn_system_from_json(space, c(json).as_ptr(), &mut out) }, SymdynStatus::Ok);
    out
}

const SIGMA_SIGMA2: &str = r#"{"factors": [{"kind": "shift_power", "p": 1}, {"kind": "shift_power", "p": 2}]}"#;

#[test]
fn space_queries() {
    let golden = space(r#"{"alphabet_size": 2, "order": 1, "forbidden_words": ["11"]}"#);
    let mut ok = true;
    unsafe {
        assert_eq!(symdyn_space_admissible(golden, [0u8, 1, 1].as_ptr(), 3, &mut ok), SymdynStatus::Ok);
        assert!(!ok);
        assert_eq!(symdyn_space_admissible(golden, [1u8, 0, 1].as_ptr(), 3, &mut ok), SymdynStatus::Ok);
        assert!(ok);
        assert_eq!(symdyn_space_admissible(golden, ptr::null(), 0, &mut ok), SymdynStatus::Ok);
        let mut n = 0;
        for (k, lucas) in [(1, 1), (2, 3), (3, 4), (4, 7), (5, 11), (6, 18)] {
            assert_eq!(symdyn_space_periodic_count(golden, k, &mut n), SymdynStatus::Ok);
            assert_eq!(n, lucas);
        }
        assert_eq!(
            symdyn_space_admissible(golden, [2u8].as_ptr(), 1, &mut ok),
            SymdynStatus::InvalidArgument
        );
        assert!(last_error().contains("out of range"));
        symdyn_space_free(golden);
    }
}

#[test]
fn certification_and_counterexample() {
    let full = space(r#"{"alphabet_size": 2}"#);
    let sys = system(full, SIGMA_SIGMA2);
    let mut satisfied = false;
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(symdyn_certify_delta(sys, 2, 40, &mut satisfied, &mut json), SymdynStatus::Ok);
        assert!(satisfied);
        assert_eq!(take(json)["tuples_total"], 64);

        let powers = [1usize, 2];
        let mut verified = false;
        assert_eq!(
            symdyn_counterexample(powers.as_ptr(), 2, 20, &mut verified, &mut json),
            SymdynStatus::Ok
        );
        assert!(verified);
        assert_eq!(take(json)["all_empty"], true);
        symdyn_system_free(sys);
        symdyn_space_free(full);
    }
}

#[test]
fn livsic_through_the_abi() {
    let full = space(r#"{"alphabet_size": 2}"#);
    let sys = system(full, SIGMA_SIGMA2);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/indicators.json");
    let functions = c(&std::fs::read_to_string(path).unwrap());
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(symdyn_livsic(sys, functions.as_ptr(), 200, 3, 4, 0, &mut json), SymdynStatus::Ok);
        let report = take(json);
        assert_eq!(report["i"]["status"], "FAIL");
        assert_eq!(report["consistent"], true);
        symdyn_system_free(sys);
        symdyn_space_free(full);
    }
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(symdyn_space_from_json(ptr::null(), &mut out), SymdynStatus::NullPointer);
        assert_eq!(
            symdyn_space_from_json(c("{\"alphabet_size\": ").as_ptr(), &mut out),
            SymdynStatus::InvalidJson
        );
        assert!(out.is_null());
        assert!(!last_error().is_empty());

        symdyn_space_free(ptr::null_mut());
        symdyn_string_free(ptr::null_mut());
        let gap = space(r#"{"alphabet_size": 2, "excluded_gap_powers": [1, 2]}"#);
        let sigma = system(gap, r#"{"factors": [{"kind": "shift_power", "p": 1}]}"#);
        let mut json = ptr::null_mut();
        let functions = c(r#"{"functions": [{"depth": 1, "entries": {"0": "0", "1": "1"}}]}"#);
        let status = symdyn_livsic(sigma, functions.as_ptr(), 10, 2, 2, 0, &mut json);
        assert!(matches!(status, SymdynStatus::Ok | SymdynStatus::NotFiniteType), "{}", last_error());
        if status == SymdynStatus::Ok {
            take(json);
        }
        let mut count = 0;
        assert_eq!(symdyn_space_periodic_count(gap, 1, &mut count), SymdynStatus::Ok);
        symdyn_system_free(sigma);
        symdyn_space_free(gap);
    }
}

#[test]
fn c_program_links_against_the_header() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libsymdyn_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("periodic=11 satisfied=1 json=1"), "{text}");
    assert!(text.contains("error=set"));
}
