use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use inertia_lab_ffi::*;
use serde_json::Value;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    il_string_free(s);
    out
}

fn last_error() -> String {
    let p = il_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn family_from_preset_certifies() {
    unsafe {
        let name = CString::new("a5").unwrap();
        let mut fam = ptr::null_mut();
        assert_eq!(il_family_from_preset(name.as_ptr(), &mut fam), IL_OK);
        let mut n = ptr::null_mut();
        assert_eq!(il_family_n(fam, &mut n), IL_OK);
        let n = take(n);
        assert!(n.parse::<u128>().is_ok(), "{n}");

        let c = CString::new("-3").unwrap();
        let mut json = ptr::null_mut();
        let mut ok = false;
        assert_eq!(il_family_certify(fam, c.as_ptr(), &mut json, &mut ok), IL_OK);
        assert!(ok);
        let v: Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["c"], "-3");
        assert_eq!(v["all_certified"], true);
        il_family_free(fam);
    }
}

#[test]
fn gate_json_has_progression() {
    unsafe {
        let text = CString::new("x^3 + t*x + 1").unwrap();
        let mut fam = ptr::null_mut();
        assert_eq!(il_family_parse(text.as_ptr(), &mut fam), IL_OK);
        let mut json = ptr::null_mut();
        assert_eq!(il_family_gate(fam, &mut json), IL_OK);
        let v: Value = serde_json::from_str(&take(json)).unwrap();
        assert!(v["progression"]["a"].is_string());
        il_family_free(fam);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let mut fam = ptr::null_mut();
        assert_eq!(il_family_from_preset(ptr::null(), &mut fam), IL_ERR_NULL_POINTER);
        let bogus = CString::new("nope").unwrap();
        assert_eq!(il_family_from_preset(bogus.as_ptr(), &mut fam), IL_ERR_USAGE);
        assert!(last_error().contains("nope"));
        assert!(fam.is_null());

        let nonmonic = CString::new("2x^3 + t*x + 1").unwrap();
        assert_eq!(il_family_parse(nonmonic.as_ptr(), &mut fam), IL_ERR_COMPUTE);
        assert!(last_error().contains("monic"));

        let bad = [0xffu8, 0];
        assert_eq!(il_family_parse(bad.as_ptr().cast(), &mut fam), IL_ERR_INVALID_UTF8);

        let s3 = CString::new("s3").unwrap();
        assert_eq!(il_family_from_preset(s3.as_ptr(), &mut fam), IL_OK);
        assert!(il_last_error().is_null());
        let c = CString::new("1.5").unwrap();
        let mut json = ptr::null_mut();
        assert_eq!(il_family_certify(fam, c.as_ptr(), &mut json, ptr::null_mut()), IL_ERR_USAGE);
        assert!(json.is_null());
        il_family_free(fam);

        il_family_free(ptr::null_mut());
        il_report_free(ptr::null_mut());
        il_string_free(ptr::null_mut());
        assert_eq!(il_report_passed(ptr::null()), IL_ERR_NULL_POINTER);
    }
}

fn argv(args: &[&str]) -> (Vec<CString>, Vec<*const c_char>) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let ptrs = owned.iter().map(|a| a.as_ptr()).collect();
    (owned, ptrs)
}

#[test]
fn run_reproduce_s3() {
    unsafe {
        let (_keep, ptrs) = argv(&["reproduce", "s3"]);
        let mut r = ptr::null_mut();
        assert_eq!(il_run(ptrs.len(), ptrs.as_ptr(), &mut r), IL_OK);
        assert_eq!(il_report_passed(r), 1);
        assert_eq!(il_report_verdict_count(r), 8);
        let mut line = ptr::null_mut();
        assert_eq!(il_report_verdict(r, 0, &mut line), IL_OK);
        assert!(take(line).starts_with("PASS"));
        assert_eq!(il_report_verdict(r, 8, &mut line), IL_ERR_USAGE);
        let mut json = ptr::null_mut();
        assert_eq!(il_report_json(r, &mut json), IL_OK);
        let v: Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["command"], "reproduce");
        il_report_free(r);
    }
}

#[test]
fn run_usage_and_compute_failures() {
    unsafe {
        let (_a, bad) = argv(&["frobnicate"]);
        let mut r = ptr::null_mut();
        assert_eq!(il_run(bad.len(), bad.as_ptr(), &mut r), IL_ERR_USAGE);
        assert!(r.is_null());

        let (_b, unknown) = argv(&["gate", "--preset", "nope"]);
        assert_eq!(il_run(unknown.len(), unknown.as_ptr(), &mut r), IL_ERR_USAGE);
        assert!(r.is_null());

        let path = std::env::temp_dir().join(format!("inertia-lab-ffi-{}.txt", std::process::id()));
        std::fs::write(&path, "2x^3 + t*x + 1").unwrap();
        let (_c, nonmonic) = argv(&["gate", "--poly-file", path.to_str().unwrap()]);
        assert_eq!(il_run(nonmonic.len(), nonmonic.as_ptr(), &mut r), IL_ERR_COMPUTE);
        assert!(!r.is_null());
        assert_eq!(il_report_passed(r), 0);
        il_report_free(r);
    }
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/inertia_lab.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(h.contains(&format!("{name}(")), "{name} missing from header");
        }
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        return;
    };
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    for (lang, file) in [("c", "probe.c"), ("c++", "probe.cpp")] {
        let probe = dir.join(file);
        std::fs::write(&probe, "#include \"inertia_lab.h\"\nint main(void) { return il_version() == 0; }\n").unwrap();
        let status = Command::new(cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg("-I")
            .arg(header().parent().unwrap())
            .arg(&probe)
            .status()
            .unwrap();
        assert!(status.success(), "{lang} compile failed");
    }
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        return;
    };
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let lib_dir = tmp.parent().unwrap().join(if cfg!(debug_assertions) { "debug" } else { "release" });
    if !lib_dir.join("libinertia_lab_ffi.so").exists() {
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = tmp.join("smoke");
    let status = Command::new(cc)
        .arg(manifest.join("c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .args(["-linertia_lab_ffi", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("all_certified = 1"), "{stdout}");
    assert!(stdout.contains("passed=1 verdicts=8"), "{stdout}");
}
