//! C ABI for the tensionlab engine.
//!
//! Scenarios travel as opaque handles; results come back as plain numbers
//! or as json-lines report strings allocated by this library and released
//! with [`tl_string_free`]. Every call returns a [`TlStatus`]; on failure
//! the message is retrievable once via [`tl_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tensionlab::builders::leggett_garg_sweep;
use tensionlab::demo::{demo_scenario, run_demo, scenario_report};
use tensionlab::doc::{parse_scenario, serialize_scenario};
use tensionlab::error::Error;
use tensionlab::joint::fine_feasibility;
use tensionlab::report::{emit_report, ReportFormat};
use tensionlab::scenario::{classical_bound, quantum_value, Scenario};

/// Status of every C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlStatus {
    /// Success.
    Ok = 0,
    /// Malformed input: bad document, unknown name, broken invariant.
    InvalidInput = 1,
    /// Numerical failure: eigensolver or LP did not converge.
    NumericalFailure = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// The library caught a panic; state is untouched.
    Panic = 5,
}

/// Opaque validated scenario handle.
pub struct TlScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn status_of(err: &Error) -> TlStatus {
    match err.exit_code() {
        2 => TlStatus::NumericalFailure,
        _ => TlStatus::InvalidInput,
    }
}

fn guard<F: FnOnce() -> TlStatus>(body: F) -> TlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            TlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, TlStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(TlStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        TlStatus::InvalidUtf8
    })
}

fn give_string(out: *mut *mut c_char, value: String) -> TlStatus {
    let owned = match CString::new(value) {
        Ok(s) => s,
        Err(_) => {
            set_error("output contained an interior NUL");
            return TlStatus::Panic;
        }
    };
    unsafe { *out = owned.into_raw() };
    TlStatus::Ok
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn tl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread, or null if none.
/// The caller owns the returned string and frees it with `tl_string_free`.
#[no_mangle]
pub extern "C" fn tl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow_mut().take() {
        Some(message) => message.into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string allocated by this library.
///
/// # Safety
/// `ptr` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tl_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

/// Parse and validate a scenario document. On success `*out` owns the
/// handle; release it with `tl_scenario_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_parse(
    json: *const c_char,
    out: *mut *mut TlScenario,
) -> TlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TlStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let text = match read_str(json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        match parse_scenario(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TlScenario { inner }));
                TlStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Build one of the canonical demo scenarios (chsh, kcbs, leggett-garg,
/// mermin-peres, ghz) as a handle.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_demo(
    name: *const c_char,
    out: *mut *mut TlScenario,
) -> TlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TlStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let name = match read_str(name) {
            Ok(name) => name,
            Err(status) => return status,
        };
        match demo_scenario(name) {
            Ok(Some(inner)) => {
                *out = Box::into_raw(Box::new(TlScenario { inner }));
                TlStatus::Ok
            }
            Ok(None) => {
                set_error("demo has no scenario document");
                TlStatus::InvalidInput
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Release a scenario handle.
///
/// # Safety
/// `scenario` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_free(scenario: *mut TlScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

unsafe fn borrow<'a>(scenario: *const TlScenario) -> Result<&'a Scenario, TlStatus> {
    if scenario.is_null() {
        set_error("null scenario handle");
        return Err(TlStatus::NullPointer);
    }
    Ok(&(*scenario).inner)
}

macro_rules! write_out {
    ($out:expr, $value:expr) => {{
        if $out.is_null() {
            set_error("null output pointer");
            return TlStatus::NullPointer;
        }
        *$out = $value;
        TlStatus::Ok
    }};
}

/// Quantum value of the scenario's inequality.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_quantum_value(
    scenario: *const TlScenario,
    out: *mut f64,
) -> TlStatus {
    guard(|| {
        let inner = match borrow(scenario) {
            Ok(inner) => inner,
            Err(status) => return status,
        };
        match quantum_value(inner) {
            Ok(value) => write_out!(out, value),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Classical bound by exhaustive deterministic-strategy enumeration.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_classical_bound(
    scenario: *const TlScenario,
    out: *mut f64,
) -> TlStatus {
    guard(|| {
        let inner = match borrow(scenario) {
            Ok(inner) => inner,
            Err(status) => return status,
        };
        match classical_bound(inner) {
            Ok((bound, _)) => write_out!(out, bound),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Joint-distribution (Fine) feasibility of the scenario's quantum
/// correlators: writes true iff a joint distribution exists.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_fine_feasible(
    scenario: *const TlScenario,
    out: *mut bool,
) -> TlStatus {
    guard(|| {
        let inner = match borrow(scenario) {
            Ok(inner) => inner,
            Err(status) => return status,
        };
        match fine_feasibility(inner) {
            Ok(verdict) => write_out!(out, verdict.is_feasible()),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Full report (quantum value, classical bound, LP verdict, tension table)
/// as a json-lines string. `violation_tol` is the margin for the violation
/// flag; pass 1e-9 for the default.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_report_json(
    scenario: *const TlScenario,
    violation_tol: f64,
    out: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TlStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let inner = match borrow(scenario) {
            Ok(inner) => inner,
            Err(status) => return status,
        };
        match scenario_report(inner, violation_tol) {
            Ok(report) => give_string(out, emit_report(&report, ReportFormat::JsonLines)),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Serialize a scenario handle back to its document form.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_scenario_to_json(
    scenario: *const TlScenario,
    out: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TlStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let inner = match borrow(scenario) {
            Ok(inner) => inner,
            Err(status) => return status,
        };
        give_string(out, serialize_scenario(inner))
    })
}

/// Run any demo by name (including uncertainty and epr-choi) and return
/// its json-lines report.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_demo_report_json(
    name: *const c_char,
    violation_tol: f64,
    out: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TlStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let name = match read_str(name) {
            Ok(name) => name,
            Err(status) => return status,
        };
        match run_demo(name, violation_tol) {
            Ok(report) => give_string(out, emit_report(&report, ReportFormat::JsonLines)),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Leggett-Garg K(θ) sweep. `thetas` and `ks` must point to `steps`
/// doubles each; both are filled on success.
///
/// # Safety
/// `thetas` and `ks` must be valid for `steps` writes.
#[no_mangle]
pub unsafe extern "C" fn tl_leggett_garg_sweep(
    from: f64,
    to: f64,
    steps: usize,
    thetas: *mut f64,
    ks: *mut f64,
) -> TlStatus {
    guard(|| {
        if thetas.is_null() || ks.is_null() {
            set_error("null output pointer");
            return TlStatus::NullPointer;
        }
        match leggett_garg_sweep(from, to, steps) {
            Ok(rows) => {
                for (i, (theta, k)) in rows.into_iter().enumerate() {
                    *thetas.add(i) = theta;
                    *ks.add(i) = k;
                }
                TlStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}
