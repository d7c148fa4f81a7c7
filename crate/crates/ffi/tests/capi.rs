use std::ffi::{c_char, CStr, CString};
use std::ptr;

use clifgeo_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cg_last_error()) }.to_str().unwrap().to_string()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    cg_string_free(p);
    s
}

fn builtin(name: &str) -> *mut CgSpec {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cg_spec_builtin(c(name).as_ptr(), &mut h) }, CG_OK, "{}", last_error());
    h
}

fn run_json(h: *const CgSpec, cmd: &str, opts: Option<&str>) -> (i32, serde_json::Value) {
    let opts = opts.map(c);
    let mut out = ptr::null_mut();
    let code = unsafe { cg_run(h, c(cmd).as_ptr(), opts.as_ref().map_or(ptr::null(), |o| o.as_ptr()), &mut out) };
    assert!(code >= 0, "{}", last_error());
    let text = unsafe { take(out) };
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn analyze_builtin() {
    let h = builtin("minkowski_cartesian");
    let (code, report) = run_json(h, "analyze", Some(r#"{"samples": 8}"#));
    assert_eq!(code, CG_OK);
    assert_eq!(report["pass"], true);
    assert_eq!(report["settings"]["samples"], 8);
    unsafe { cg_spec_free(h) };
}

#[test]
fn killing_failure_is_reported_not_an_error() {
    let h = builtin("friedmann");
    let (code, report) = run_json(h, "killing", None);
    assert_eq!(code, CG_CHECKS_FAILED);
    assert_eq!(report["suspected_typos"], 1);
    unsafe { cg_spec_free(h) };
}

#[test]
fn mass_with_param_override() {
    let h = builtin("schwarzschild_isotropic");
    assert_eq!(unsafe { cg_spec_set_param(h, c("m").as_ptr(), 2.0) }, CG_OK);
    let (code, report) = run_json(h, "mass", Some(r#"{"radii": [100, 300, 1000]}"#));
    assert_eq!(code, CG_OK);
    let m = report["mass"]["extrapolated"].as_f64().unwrap();
    assert!((m - 2.0).abs() < 0.02, "{m}");
    assert_eq!(unsafe { cg_spec_set_param(h, c("nope").as_ptr(), 1.0) }, CG_ERR_SPEC);
    assert!(last_error().contains("nope"));
    unsafe { cg_spec_free(h) };
}

#[test]
fn em_needs_field() {
    let h = builtin("minkowski_spherical");
    let mut out = ptr::null_mut();
    let code = unsafe { cg_run(h, c("em").as_ptr(), ptr::null(), &mut out) };
    assert_eq!(code, CG_ERR_USAGE);
    assert!(out.is_null());
    let (code, report) = run_json(h, "em", Some(r#"{"samples": 16, "field": {"F": {"10": "q/r^2"}, "parameters": {"q": 1}}}"#));
    assert_eq!(code, CG_OK, "{report}");
    unsafe { cg_spec_free(h) };
}

#[test]
fn spec_json_round_trip() {
    let h = builtin("desitter_inner");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cg_spec_to_json(h, &mut out) }, CG_OK);
    let text = unsafe { take(out) };
    let mut h2 = ptr::null_mut();
    assert_eq!(unsafe { cg_spec_from_json(c(&text).as_ptr(), &mut h2) }, CG_OK);
    let mut out2 = ptr::null_mut();
    assert_eq!(unsafe { cg_spec_to_json(h2, &mut out2) }, CG_OK);
    assert_eq!(unsafe { take(out2) }, text);
    unsafe {
        cg_spec_free(h);
        cg_spec_free(h2);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cg_spec_builtin(c("nosuch").as_ptr(), &mut h) }, CG_ERR_SPEC);
    assert!(h.is_null());
    assert!(last_error().contains("friedmann"), "valid names listed");

    assert_eq!(unsafe { cg_spec_from_json(c("{\"name\": 3}").as_ptr(), &mut h) }, CG_ERR_SPEC);
    assert!(last_error().contains("name"));

    assert_eq!(unsafe { cg_spec_builtin(ptr::null(), &mut h) }, CG_ERR_NULL);
    assert_eq!(unsafe { cg_spec_builtin(c("friedmann").as_ptr(), ptr::null_mut()) }, CG_ERR_NULL);

    let bad = [0xffu8, 0];
    assert_eq!(unsafe { cg_spec_builtin(bad.as_ptr() as *const c_char, &mut h) }, CG_ERR_UTF8);

    let spec = builtin("friedmann");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cg_run(spec, c("dance").as_ptr(), ptr::null(), &mut out) }, CG_ERR_USAGE);
    assert_eq!(unsafe { cg_run(spec, c("grav").as_ptr(), c("{\"bogus\": 1}").as_ptr(), &mut out) }, CG_ERR_SPEC);
    assert!(last_error().contains("bogus"));
    assert_eq!(unsafe { cg_run(ptr::null(), c("grav").as_ptr(), ptr::null(), &mut out) }, CG_ERR_NULL);
    unsafe { cg_spec_free(spec) };
    unsafe { cg_spec_free(ptr::null_mut()) };
    unsafe { cg_string_free(ptr::null_mut()) };
}

#[test]
fn selftest_passes() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cg_selftest(7, &mut out) }, CG_OK);
    let v: serde_json::Value = serde_json::from_str(&unsafe { take(out) }).unwrap();
    assert_eq!(v["command"], "selftest");
    assert!(last_error().is_empty());
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/clifgeo.h")).unwrap();
    for name in [
        "typedef struct CgSpec CgSpec;",
        "cg_spec_builtin",
        "cg_spec_from_json",
        "cg_spec_set_param",
        "cg_spec_to_json",
        "cg_spec_free",
        "cg_run",
        "cg_selftest",
        "cg_last_error",
        "cg_string_free",
        "#define CG_ERR_PANIC -6",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let src = std::env::temp_dir().join(format!("clifgeo-header-{}.c", std::process::id()));
    std::fs::write(&src, "#include \"clifgeo.h\"\nint main(void) { return cg_last_error() == 0; }\n").unwrap();
    let status = match std::process::Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", dir]).arg(&src).status() {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler, skipping");
            return;
        }
    };
    std::fs::remove_file(&src).ok();
    assert!(status.success());
}
