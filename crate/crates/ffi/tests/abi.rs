// SPDX-License-Identifier: Apache-2.0

//! The C interface exercised through its exported symbols, and the generated
//! header compiled and linked by a C compiler.

use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dnflat_ffi::*;

fn data(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dn_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { dn_string_free(s) };
    out
}

fn parse(name: &str) -> *mut DnBracket {
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { dn_bracket_parse(data(name).as_ptr(), &mut b) }, DnStatus::Ok, "{}", last_error());
    b
}

fn run(b: *const DnBracket, command: &str, opts: Option<&DnOptions>, map: *const DnMap) -> (DnStatus, serde_json::Value) {
    let command = CString::new(command).unwrap();
    let mut out = ptr::null_mut();
    let opts = opts.map_or(ptr::null(), |o| o as *const DnOptions);
    let status = unsafe { dn_run(b, command.as_ptr(), opts, map, &mut out) };
    if out.is_null() {
        return (status, serde_json::Value::Null);
    }
    (status, serde_json::from_str(&take(out)).unwrap())
}

fn check_names(report: &serde_json::Value) -> Vec<String> {
    report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_owned()).collect()
}

#[test]
fn flatness_and_curvature_through_handles() {
    let b = parse("nonflat_k3.json");
    assert_eq!(unsafe { dn_bracket_dim(b) }, 2);
    assert_eq!(unsafe { dn_bracket_degree(b) }, 3);
    let mut poisson = false;
    assert_eq!(unsafe { dn_bracket_is_poisson(b, &mut poisson) }, DnStatus::Ok);
    assert!(poisson);

    let (status, report) = run(b, "flatness", None, ptr::null());
    assert_eq!(status, DnStatus::Ok);
    assert!(check_names(&report).contains(&"G[2] flat".to_owned()));

    let opts = DnOptions {
        which: DnFamily::Standard,
        s: 1,
        ..dn_options_default()
    };
    let (status, report) = run(b, "curvature", Some(&opts), ptr::null());
    assert_eq!(status, DnStatus::Ok);
    assert!(report.to_string().contains("4/9/u1^2"), "{report}");
    unsafe { dn_bracket_free(b) };
}

#[test]
fn failing_checks_are_reported_not_errors() {
    let b = parse("nonflat_k3_skew_perturbed.json");
    let mut poisson = true;
    assert_eq!(unsafe { dn_bracket_is_poisson(b, &mut poisson) }, DnStatus::Ok);
    assert!(!poisson);
    let (status, report) = run(b, "jacobi", None, ptr::null());
    assert_eq!(status, DnStatus::ChecksFailed);
    assert!(report.to_string().contains("D_P^2("), "{report}");
    unsafe { dn_bracket_free(b) };
}

#[test]
fn transform_round_trips_through_json() {
    let b = parse("nonflat_k3.json");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dn_map_parse(data("projective_map.json").as_ptr(), &mut m) }, DnStatus::Ok);
    let (status, _) = run(b, "transform", None, m);
    assert_eq!(status, DnStatus::Ok);

    let mut t = ptr::null_mut();
    assert_eq!(unsafe { dn_bracket_transform(b, m, &mut t) }, DnStatus::Ok, "{}", last_error());
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { dn_bracket_to_json(t, &mut json) }, DnStatus::Ok);
    let json = CString::new(take(json)).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { dn_bracket_parse(json.as_ptr(), &mut again) }, DnStatus::Ok, "{}", last_error());
    let (status, _) = run(again, "flatness", None, ptr::null());
    assert_eq!(status, DnStatus::Ok);
    unsafe {
        dn_bracket_free(again);
        dn_bracket_free(t);
        dn_map_free(m);
        dn_bracket_free(b);
    }
}

#[test]
fn errors_map_to_codes_and_messages() {
    let mut b = ptr::null_mut();
    let bad = CString::new("{\"n\": 2, \"k\": 1, \"entries\": [{\"s\": 0, \"i\": 3, \"j\": 1, \"expr\": \"1\"}]}").unwrap();
    assert_eq!(unsafe { dn_bracket_parse(bad.as_ptr(), &mut b) }, DnStatus::InvalidInput);
    assert!(b.is_null());
    assert!(last_error().contains("out of range"), "{}", last_error());

    assert_eq!(unsafe { dn_bracket_parse(ptr::null(), &mut b) }, DnStatus::NullPointer);
    assert_eq!(unsafe { dn_bracket_parse(bad.as_ptr(), ptr::null_mut()) }, DnStatus::NullPointer);

    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { dn_bracket_parse(invalid.as_ptr().cast(), &mut b) },
        DnStatus::InvalidUtf8
    );

    let good = parse("constant_k3.json");
    let (status, _) = run(good, "frobnicate", None, ptr::null());
    assert_eq!(status, DnStatus::InvalidInput);
    let (status, report) = run(good, "transform", None, ptr::null());
    assert_eq!(status, DnStatus::Precondition);
    assert!(report.is_null());
    assert!(last_error().contains("coordinate map"));
    let (status, _) = run(good, "connections", None, ptr::null());
    assert_eq!(status, DnStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe {
        dn_bracket_free(good);
        dn_bracket_free(ptr::null_mut());
        dn_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { dn_bracket_dim(ptr::null()) }, 0);
    let version = unsafe { CStr::from_ptr(dn_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Directory holding the library artifacts of this build.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "dnflat.h"

int main(int argc, char **argv) {
    FILE *f = fopen(argv[1], "rb");
    static char buf[1 << 16];
    size_t len = fread(buf, 1, sizeof buf - 1, f);
    fclose(f);
    buf[len] = 0;

    DnBracket *b = NULL;
    if (dn_bracket_parse(buf, &b) != DN_STATUS_OK) { fprintf(stderr, "%s\n", dn_last_error()); return 10; }
    DnOptions opts = dn_options_default();
    char *report = NULL;
    DnStatus st = dn_run(b, "flatness", &opts, NULL, &report);
    if (st != DN_STATUS_OK || strstr(report, "G[2] flat") == NULL) return 11;
    dn_string_free(report);
    if (dn_bracket_parse("{", &b) != DN_STATUS_INVALID_INPUT || strlen(dn_last_error()) == 0) return 12;
    dn_bracket_free(b);
    printf("ok %zu %u\n", dn_bracket_dim(NULL), (unsigned)DN_STATUS_CHECKS_FAILED);
    return 0;
}
"#;

#[test]
fn generated_header_compiles_and_links_from_c() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("dnflat.h").exists(), "header not generated");
    let staticlib = artifact_dir().join("libdnflat_ffi.a");
    assert!(staticlib.exists(), "missing {}", staticlib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let build = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler runs");
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));

    let input = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/nonflat_k3.json");
    let out = Command::new(&exe).arg(input).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok 0 1\n");
}
