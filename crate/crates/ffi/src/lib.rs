//! C ABI over `symdyn`.
//!
//! Spaces and systems are opaque handles created from JSON and released with
//! their `_free` function. Every call returns a [`SymdynStatus`]; on failure
//! `symdyn_last_error()` describes the problem. Reports come back as
//! NUL-terminated JSON owned by the caller and released with
//! `symdyn_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symdyn::cli::FunctionsFile;
use symdyn::cylinder::CylinderUnion;
use symdyn::delta::{certify_delta_transitive, counterexample_shift, verify_counterexample};
use symdyn::livsic::{closing_manifest, equivalence_experiment, ExperimentConfig, LocallyConstantFn, SweepConfig};
use symdyn::symbolic::{ShiftSpace, ShiftSpaceJson};
use symdyn::systems::{MapSpec, ProductSystem, SystemJson};
use symdyn::Error;

/// Result of every exported call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymdynStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidArgument = 4,
    Budget = 5,
    NotFiniteType = 6,
    Unsupported = 7,
    Panic = 8,
}

/// A shift space.
pub struct SymdynSpace {
    space: ShiftSpace,
}

/// A space together with commuting factor maps.
pub struct SymdynSystem {
    system: ProductSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SymdynStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Budget { .. } => SymdynStatus::Budget,
            Error::NotFiniteType => SymdynStatus::NotFiniteType,
            Error::InexactImage | Error::NotShiftPower(_) | Error::Reducible => SymdynStatus::Unsupported,
            _ => SymdynStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(SymdynStatus::InvalidJson, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SymdynStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SymdynStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SymdynStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SymdynStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SymdynStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let json = serde_json::to_string(value)?;
    *out = CString::new(json).expect("JSON has no NULs").into_raw();
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn symdyn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn symdyn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a space description such as `{"alphabet_size":2}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_space_from_json(json: *const c_char, out: *mut *mut SymdynSpace) -> SymdynStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let j: ShiftSpaceJson = serde_json::from_str(text)?;
        let space = ShiftSpace::from_json(&j)?;
        *out = Box::into_raw(Box::new(SymdynSpace { space }));
        Ok(())
    })
}

/// # Safety
/// `space` must come from `symdyn_space_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn symdyn_space_free(space: *mut SymdynSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Whether `symbols[0..len]` is an admissible word.
///
/// # Safety
/// `space` must be a live handle, `symbols` readable for `len` bytes and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_space_admissible(
    space: *const SymdynSpace,
    symbols: *const u8,
    len: usize,
    out: *mut bool,
) -> SymdynStatus {
    guard(|| {
        let space = space.as_ref().ok_or_else(|| null("space"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let word: &[u8] = if len == 0 {
            &[]
        } else if symbols.is_null() {
            return Err(null("symbols"));
        } else {
            std::slice::from_raw_parts(symbols, len)
        };
        *out = space.space.admissible(word)?;
        Ok(())
    })
}

/// Number of points with `σ^k x = x`.
///
/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_space_periodic_count(
    space: *const SymdynSpace,
    k: usize,
    out: *mut u64,
) -> SymdynStatus {
    guard(|| {
        let space = space.as_ref().ok_or_else(|| null("space"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = space.space.periodic_points(k)?.len() as u64;
        Ok(())
    })
}

/// Builds a system on a copy of `space` from `{"factors":[...]}`.
///
/// # Safety
/// `space` must be a live handle, `json` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_system_from_json(
    space: *const SymdynSpace,
    json: *const c_char,
    out: *mut *mut SymdynSystem,
) -> SymdynStatus {
    guard(|| {
        let space = space.as_ref().ok_or_else(|| null("space"))?;
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let j: SystemJson = serde_json::from_str(text)?;
        let factors: Vec<MapSpec> = j.into_factors(&space.space)?;
        let system = if factors.len() == 1 {
            ProductSystem::single(space.space.clone(), factors.into_iter().next().unwrap())?
        } else {
            ProductSystem::new(space.space.clone(), factors)?
        };
        *out = Box::into_raw(Box::new(SymdynSystem { system }));
        Ok(())
    })
}

/// # Safety
/// `system` must come from `symdyn_system_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn symdyn_system_free(system: *mut SymdynSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Common-time certification over all cylinder tuples of `depth`.
/// `*satisfied` is set when every tuple has a time `n ≤ n_max`.
///
/// # Safety
/// `system` must be a live handle; `satisfied` may be null; `out_json` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_certify_delta(
    system: *const SymdynSystem,
    depth: usize,
    n_max: usize,
    satisfied: *mut bool,
    out_json: *mut *mut c_char,
) -> SymdynStatus {
    guard(|| {
        let system = system.as_ref().ok_or_else(|| null("system"))?;
        let report = certify_delta_transitive(system.system.space(), system.system.factors(), depth, n_max)?;
        if !satisfied.is_null() {
            *satisfied = report.all_satisfied;
        }
        write_json(out_json, &report)
    })
}

/// Checks the gap-excluded shift for `powers[0..len]` up to `n_max`.
///
/// # Safety
/// `powers` must be readable for `len` entries; `verified` may be null;
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_counterexample(
    powers: *const usize,
    len: usize,
    n_max: usize,
    verified: *mut bool,
    out_json: *mut *mut c_char,
) -> SymdynStatus {
    guard(|| {
        if powers.is_null() {
            return Err(null("powers"));
        }
        let powers = std::slice::from_raw_parts(powers, len);
        let (spec, _) = counterexample_shift(powers)?;
        let report = verify_counterexample(&spec, n_max)?;
        if !verified.is_null() {
            *verified = report.verified();
        }
        write_json(out_json, &report)
    })
}

/// Runs the four-statement experiment for the functions file `functions_json`
/// (the same format the command-line tool reads).
///
/// # Safety
/// `system` must be a live handle, `functions_json` NUL-terminated and
/// `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_livsic(
    system: *const SymdynSystem,
    functions_json: *const c_char,
    horizon: usize,
    k_max: usize,
    samples: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> SymdynStatus {
    guard(|| {
        let system = system.as_ref().ok_or_else(|| null("system"))?;
        let file: FunctionsFile = serde_json::from_str(read_str(functions_json, "functions_json")?)?;
        let space = system.system.space();
        let fs = file
            .functions
            .iter()
            .map(|j| LocallyConstantFn::from_json(space, j))
            .collect::<symdyn::Result<Vec<_>>>()?;
        let region = match &file.region {
            Some(j) => CylinderUnion::from_json(space, j)?,
            None => CylinderUnion::full(space),
        };
        let cfg = ExperimentConfig {
            horizon,
            k_max,
            samples,
            seed,
        };
        let report = equivalence_experiment(&fs, &system.system, &region, cfg)?;
        write_json(out_json, &report)
    })
}

/// Exhaustive closing-property sweep with the default configuration.
///
/// # Safety
/// `violations` may be null; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symdyn_validate_closing(violations: *mut u64, out_json: *mut *mut c_char) -> SymdynStatus {
    guard(|| {
        let manifest = closing_manifest(SweepConfig::default())?;
        if !violations.is_null() {
            *violations = manifest.violations();
        }
        write_json(out_json, &manifest)
    })
}
