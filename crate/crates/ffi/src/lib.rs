//! C ABI for `inertia-lab`.
//!
//! - Handles are opaque pointers; free each with its `*_free` function.
//! - Every fallible call returns an `int32_t` status, `IL_OK` on success.
//! - Strings handed out by the library are freed with `il_string_free`.
//! - The message of the most recent failure on the calling thread is in
//!   `il_last_error()`.
//!
//! ```c
//! #include "inertia_lab.h"
//!
//! IlFamily *fam = NULL;
//! if (il_family_from_preset("a5", &fam) != IL_OK) {
//!     fprintf(stderr, "%s\n", il_last_error());
//!     return 1;
//! }
//! char *json = NULL;
//! il_family_certify(fam, "-3", &json);
//! puts(json);
//! il_string_free(json);
//! il_family_free(fam);
//! ```

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use num_bigint::BigInt;

use inertia_lab::cli::{execute, Cli, Failure};
use inertia_lab::gate::{compute_n, run_gate, GateOptions, GcdData};
use inertia_lab::inertia::{Certifier, CertifyOptions};
use inertia_lab::report::RunReport;
use inertia_lab::{presets, zpoly};

pub const IL_OK: i32 = 0;
pub const IL_ERR_NULL_POINTER: i32 = -1;
pub const IL_ERR_INVALID_UTF8: i32 = -2;
/// Unknown preset, bad polynomial text, bad integer or bad arguments.
pub const IL_ERR_USAGE: i32 = -3;
/// The computation itself failed; a report handle may still be produced.
pub const IL_ERR_COMPUTE: i32 = -4;
/// A report was produced but one of its verdicts failed.
pub const IL_ERR_VERDICT: i32 = -5;
pub const IL_ERR_PANIC: i32 = -99;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(i32, String);

type FfiResult<T> = Result<T, Fail>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> i32 {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IL_OK,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            IL_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Fail(IL_ERR_NULL_POINTER, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(IL_ERR_INVALID_UTF8, format!("{what} is not UTF-8")))
}

fn out_arg<T>(p: *mut T, what: &str) -> FfiResult<()> {
    if p.is_null() {
        Err(Fail(IL_ERR_NULL_POINTER, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Fail(IL_ERR_NULL_POINTER, format!("{what} is null")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn compute(e: impl std::fmt::Display) -> Fail {
    Fail(IL_ERR_COMPUTE, e.to_string())
}

/// A one-parameter family `f(t, x)` with its gcd data computed.
pub struct IlFamily {
    certifier: Certifier,
}

/// A run report, as emitted by the command line tool.
pub struct IlReport {
    report: RunReport,
}

fn family(data: GcdData) -> Box<IlFamily> {
    Box::new(IlFamily { certifier: Certifier::new(data, CertifyOptions::default()) })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn il_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn il_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn il_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a family from a preset name (`s3`, `a5`, `psl27`, `psl33`).
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn il_family_from_preset(name: *const c_char, out: *mut *mut IlFamily) -> i32 {
    guard(|| {
        let name = str_arg(name, "name")?;
        out_arg(out, "out")?;
        let preset = presets::by_name(name).ok_or_else(|| Fail(IL_ERR_USAGE, format!("unknown preset {name}")))?;
        let data = compute_n(&preset.f()).map_err(compute)?;
        *out = Box::into_raw(family(data));
        Ok(())
    })
}

/// Builds a family from polynomial text such as `x^3 + t*x + 1`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn il_family_parse(text: *const c_char, out: *mut *mut IlFamily) -> i32 {
    guard(|| {
        let text = str_arg(text, "text")?;
        out_arg(out, "out")?;
        let f = zpoly::parse_poly(text.trim()).map_err(|e| Fail(IL_ERR_USAGE, e.to_string()))?;
        let data = compute_n(&f).map_err(compute)?;
        *out = Box::into_raw(family(data));
        Ok(())
    })
}

/// # Safety
/// `fam` must be null or a handle from `il_family_*`, freed once.
#[no_mangle]
pub unsafe extern "C" fn il_family_free(fam: *mut IlFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// The constant `N` as a decimal string.
///
/// # Safety
/// `fam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn il_family_n(fam: *const IlFamily, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let fam = handle(fam, "family")?;
        out_arg(out, "out")?;
        *out = to_c(fam.certifier.data.n_value.to_string());
        Ok(())
    })
}

/// Runs the gate with default options and writes the certificate as JSON.
///
/// # Safety
/// `fam` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn il_family_gate(fam: *const IlFamily, out_json: *mut *mut c_char) -> i32 {
    guard(|| {
        let fam = handle(fam, "family")?;
        out_arg(out_json, "out_json")?;
        let cert = run_gate(&fam.certifier.data.f, &GateOptions::default()).map_err(compute)?;
        *out_json = to_c(serde_json::to_string(&cert).map_err(compute)?);
        Ok(())
    })
}

/// Certifies the specialization at `c` (a decimal integer) and writes the
/// certificate as JSON. `all_certified` may be null.
///
/// # Safety
/// `fam` must be a live handle; `c` a nul-terminated string; `out_json`
/// writable; `all_certified` null or writable.
#[no_mangle]
pub unsafe extern "C" fn il_family_certify(
    fam: *const IlFamily,
    c: *const c_char,
    out_json: *mut *mut c_char,
    all_certified: *mut bool,
) -> i32 {
    guard(|| {
        let fam = handle(fam, "family")?;
        let c = str_arg(c, "c")?;
        out_arg(out_json, "out_json")?;
        let c: BigInt = c.trim().parse().map_err(|_| Fail(IL_ERR_USAGE, format!("not an integer: {c}")))?;
        let cert = fam.certifier.certify(&c).map_err(compute)?;
        if !all_certified.is_null() {
            *all_certified = cert.all_certified;
        }
        *out_json = to_c(serde_json::to_string(&cert).map_err(compute)?);
        Ok(())
    })
}

/// Runs one command line invocation, `argv[0]` excluded, and returns its
/// report. On `IL_ERR_COMPUTE` and `IL_ERR_VERDICT` the report is still
/// written to `out`; on other errors `out` is left untouched.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn il_run(argc: usize, argv: *const *const c_char, out: *mut *mut IlReport) -> i32 {
    let mut status = IL_OK;
    let code = guard(|| {
        out_arg(out, "out")?;
        if argc > 0 && argv.is_null() {
            return Err(Fail(IL_ERR_NULL_POINTER, "argv is null".into()));
        }
        let mut args = vec!["inertia-lab".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argv entry")?.to_string());
        }
        let cli = Cli::try_parse_from(&args).map_err(|e| Fail(IL_ERR_USAGE, e.to_string()))?;
        if cli.json.is_some() {
            return Err(Fail(IL_ERR_USAGE, "--json is not available here; use il_report_json".into()));
        }
        let (report, _, failure) = execute(&cli);
        let verdict_failed = !report.passed;
        *out = Box::into_raw(Box::new(IlReport { report }));
        match failure {
            Some(Failure::Usage(msg)) => {
                il_report_free(*out);
                *out = ptr::null_mut();
                Err(Fail(IL_ERR_USAGE, msg))
            }
            Some(Failure::Compute(msg)) => {
                status = IL_ERR_COMPUTE;
                set_error(msg);
                Ok(())
            }
            None if verdict_failed => {
                status = IL_ERR_VERDICT;
                set_error("a verdict failed");
                Ok(())
            }
            None => Ok(()),
        }
    });
    if code == IL_OK {
        status
    } else {
        code
    }
}

/// # Safety
/// `r` must be null or a handle from `il_run`, freed once.
#[no_mangle]
pub unsafe extern "C" fn il_report_free(r: *mut IlReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn il_report_json(r: *const IlReport, out_json: *mut *mut c_char) -> i32 {
    guard(|| {
        let r = handle(r, "report")?;
        out_arg(out_json, "out_json")?;
        *out_json = to_c(r.report.to_json());
        Ok(())
    })
}

/// 1 when every verdict passed, 0 otherwise, negative on a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn il_report_passed(r: *const IlReport) -> i32 {
    match r.as_ref() {
        Some(r) => r.report.passed as i32,
        None => {
            set_error("report is null");
            IL_ERR_NULL_POINTER
        }
    }
}

/// Number of verdict lines in the report, or 0 on a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn il_report_verdict_count(r: *const IlReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.verdicts.len())
}

/// Verdict `i` as one `PASS`/`FAIL` line.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn il_report_verdict(r: *const IlReport, i: usize, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let r = handle(r, "report")?;
        out_arg(out, "out")?;
        let v = r.report.verdicts.get(i).ok_or_else(|| Fail(IL_ERR_USAGE, format!("no verdict {i}")))?;
        *out = to_c(v.to_string());
        Ok(())
    })
}
