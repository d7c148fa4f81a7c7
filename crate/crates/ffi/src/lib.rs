//! C ABI over clifgeo.
//!
//! Spacetimes live behind an opaque `CgSpec` handle. Every entry point
//! returns an `int32_t` status; reports come back as NUL-terminated JSON
//! strings that the caller releases with `cg_string_free`. On a negative
//! status `cg_last_error` describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clifgeo::catalog;
use clifgeo::energy::Quadrature;
use clifgeo::geometry::Sampling;
use clifgeo::spec::{EmFieldSpec, Spacetime, SpacetimeSpec};
use clifgeo::suite::{run, selftest, Command, RunError, RunOptions};
use serde::Deserialize;

/// Success; for `cg_run` and `cg_selftest` also "every check passed".
pub const CG_OK: i32 = 0;
/// The report was produced but at least one check failed.
pub const CG_CHECKS_FAILED: i32 = 1;
pub const CG_ERR_NULL: i32 = -1;
pub const CG_ERR_UTF8: i32 = -2;
/// Malformed spec, field or options JSON, or a bad expression.
pub const CG_ERR_SPEC: i32 = -3;
/// The run itself failed (no admissible sample points, unsupported chart, ...).
pub const CG_ERR_RUN: i32 = -4;
/// Unknown command or missing command input.
pub const CG_ERR_USAGE: i32 = -5;
pub const CG_ERR_PANIC: i32 = -6;

/// A parsed and compiled spacetime.
pub struct CgSpec {
    spec: SpacetimeSpec,
    compiled: Spacetime,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(i32, String);

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        let code = match e {
            RunError::Spec(_) => CG_ERR_SPEC,
            RunError::Usage(_) => CG_ERR_USAGE,
            _ => CG_ERR_RUN,
        };
        Failure(code, e.to_string())
    }
}

impl From<clifgeo::spec::SpecError> for Failure {
    fn from(e: clifgeo::spec::SpecError) -> Self {
        Failure(CG_ERR_SPEC, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Run `f`, record any failure and turn panics into `CG_ERR_PANIC`.
fn guarded(f: impl FnOnce() -> Result<i32, Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(code)) => {
            set_error("");
            code
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            CG_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(CG_ERR_NULL, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(CG_ERR_UTF8, format!("{what} is not UTF-8")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure(CG_ERR_NULL, format!("{what} is null")));
    }
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn new_handle(spec: SpacetimeSpec, out: *mut *mut CgSpec) -> Result<i32, Failure> {
    let compiled = spec.compile()?;
    let h = Box::new(CgSpec { spec, compiled });
    unsafe { *out = Box::into_raw(h) };
    Ok(CG_OK)
}

/// Open one of the builtin spacetimes by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_spec_builtin(name: *const c_char, out: *mut *mut CgSpec) -> i32 {
    guarded(|| {
        out_arg(out, "out")?;
        let name = str_arg(name, "name")?;
        new_handle(catalog::builtin(name)?, out)
    })
}

/// Parse a spacetime spec from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_spec_from_json(json: *const c_char, out: *mut *mut CgSpec) -> i32 {
    guarded(|| {
        out_arg(out, "out")?;
        let text = str_arg(json, "json")?;
        new_handle(SpacetimeSpec::from_json(text)?, out)
    })
}

/// Override an existing parameter and recompile. On error the handle is unchanged.
///
/// # Safety
/// `spec` must come from `cg_spec_builtin` or `cg_spec_from_json`.
#[no_mangle]
pub unsafe extern "C" fn cg_spec_set_param(spec: *mut CgSpec, name: *const c_char, value: f64) -> i32 {
    guarded(|| {
        let h = spec.as_mut().ok_or(Failure(CG_ERR_NULL, "spec is null".into()))?;
        let name = str_arg(name, "name")?;
        let updated = h.spec.clone().with_params(&[(name.to_string(), value)])?;
        h.compiled = updated.compile()?;
        h.spec = updated;
        Ok(CG_OK)
    })
}

/// The spec as JSON, in the same format `cg_spec_from_json` reads.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_spec_to_json(spec: *const CgSpec, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        out_arg(out, "out")?;
        let h = spec.as_ref().ok_or(Failure(CG_ERR_NULL, "spec is null".into()))?;
        *out = to_c_string(h.spec.to_json());
        Ok(CG_OK)
    })
}

/// # Safety
/// `spec` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_spec_free(spec: *mut CgSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Options {
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_verdict_tol")]
    verdict_tol: f64,
    #[serde(default)]
    m2: Option<f64>,
    #[serde(default)]
    radii: Vec<f64>,
    #[serde(default)]
    field: Option<EmFieldSpec>,
}

fn default_samples() -> usize {
    64
}
fn default_seed() -> u64 {
    42
}
fn default_tol() -> f64 {
    1e-9
}
fn default_verdict_tol() -> f64 {
    1e-6
}

fn parse_options(text: Option<&str>) -> Result<RunOptions, Failure> {
    let o: Options = match text {
        None => serde_json::from_str("{}").expect("empty options"),
        Some(t) => clifgeo::spec::from_json_str(t, "options")?,
    };
    Ok(RunOptions {
        sampling: Sampling { count: o.samples, seed: o.seed },
        tol: o.tol,
        verdict_tol: o.verdict_tol,
        m2: o.m2,
        radii: o.radii,
        field: o.field,
        quadrature: Quadrature::default(),
    })
}

/// Run `command` ("analyze", "killing", "em", "grav" or "mass") and return
/// the JSON report in `*report_json`.
///
/// `options_json` may be null; otherwise an object with any of `samples`,
/// `seed`, `tol`, `verdict_tol`, `m2`, `radii` and `field` (an EM field
/// object, required by "em"). Returns `CG_OK` or `CG_CHECKS_FAILED` when a
/// report was written.
///
/// # Safety
/// `spec` must be a live handle, strings NUL-terminated, `report_json` valid.
#[no_mangle]
pub unsafe extern "C" fn cg_run(
    spec: *const CgSpec,
    command: *const c_char,
    options_json: *const c_char,
    report_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        out_arg(report_json, "report_json")?;
        let h = spec.as_ref().ok_or(Failure(CG_ERR_NULL, "spec is null".into()))?;
        let cmd: Command = str_arg(command, "command")?.parse()?;
        let opts_text = if options_json.is_null() { None } else { Some(str_arg(options_json, "options_json")?) };
        let opts = parse_options(opts_text)?;
        let report = run(cmd, &h.compiled, &opts)?;
        *report_json = to_c_string(report.to_json());
        Ok(if report.pass { CG_OK } else { CG_CHECKS_FAILED })
    })
}

/// Algebra and expression property suite.
///
/// # Safety
/// `report_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_selftest(seed: u64, report_json: *mut *mut c_char) -> i32 {
    guarded(|| {
        out_arg(report_json, "report_json")?;
        let report = selftest(seed);
        *report_json = to_c_string(report.to_json());
        Ok(if report.pass { CG_OK } else { CG_CHECKS_FAILED })
    })
}

/// Message for the last failure on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
