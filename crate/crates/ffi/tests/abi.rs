use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use bdiv_ffi::*;

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { bdiv_string_free(s) };
    out
}

#[test]
fn tower_handle_round_trip() {
    let t = bdiv_tower_new_p2();
    let l = CString::new("L").unwrap();
    let b = CString::new("B").unwrap();
    unsafe {
        assert_eq!(bdiv_tower_register_curve(t, l.as_ptr(), 1), BdivStatus::Ok);
        assert_eq!(bdiv_tower_register_curve(t, b.as_ptr(), 1), BdivStatus::Ok);
        let names = [l.as_ptr(), b.as_ptr()];
        let mut m = 0usize;
        assert_eq!(bdiv_tower_blow_up(t, 0, names.as_ptr(), 2, ptr::null(), &mut m), BdivStatus::Ok);
        assert_eq!(m, 1);
        assert_eq!(bdiv_tower_model_count(t), 2);
        let mut r = BdivRational::default();
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(bdiv_tower_intersect_curves(t, l.as_ptr(), l.as_ptr(), 1, &mut r, &mut text), BdivStatus::Ok);
        assert_eq!(r, BdivRational { num: 0, den: 1 });
        assert_eq!(take(text), "0/1");
        let e = CString::new("E1").unwrap();
        assert_eq!(bdiv_tower_intersect_curves(t, e.as_ptr(), e.as_ptr(), 1, &mut r, ptr::null_mut()), BdivStatus::Ok);
        assert_eq!(r, BdivRational { num: -1, den: 1 });
        bdiv_tower_free(t);
    }
}

#[test]
fn errors_set_status_and_message() {
    let t = bdiv_tower_new_p2();
    let q = CString::new("Q").unwrap();
    unsafe {
        let names = [q.as_ptr()];
        let mut m = 0usize;
        assert_eq!(bdiv_tower_blow_up(t, 0, names.as_ptr(), 1, ptr::null(), &mut m), BdivStatus::Validation);
        let msg = CStr::from_ptr(bdiv_last_error()).to_str().unwrap();
        assert!(msg.contains("Q"), "{msg}");
        assert_eq!(bdiv_tower_register_curve(ptr::null_mut(), q.as_ptr(), 1), BdivStatus::InvalidArgument);
        assert_eq!(bdiv_tower_register_curve(t, ptr::null(), 1), BdivStatus::InvalidArgument);
        let mut r = BdivRational::default();
        assert_eq!(bdiv_appendix_degree(30, &mut r, ptr::null_mut()), BdivStatus::Validation);
        bdiv_tower_free(t);
        bdiv_tower_free(ptr::null_mut());
    }
}

#[test]
fn appendix_values() {
    let mut r = BdivRational::default();
    let mut text: *mut c_char = ptr::null_mut();
    unsafe {
        assert_eq!(bdiv_appendix_degree(4, &mut r, &mut text), BdivStatus::Ok);
        assert_eq!(r, BdivRational { num: 49, den: 16 });
        assert_eq!(take(text), "49/16");
        assert_eq!(bdiv_appendix_volume(3, BdivNormalization::WithFactorial, &mut r, ptr::null_mut()), BdivStatus::Ok);
        assert_eq!(r, BdivRational { num: 1, den: 1 });
        assert_eq!(bdiv_appendix_volume(3, BdivNormalization::WithoutFactorial, &mut r, ptr::null_mut()), BdivStatus::Ok);
        assert_eq!(r, BdivRational { num: 1, den: 2 });
        assert_eq!(bdiv_appendix_volume(0, BdivNormalization::WithFactorial, &mut r, ptr::null_mut()), BdivStatus::ReductionRefused);
    }
}

#[test]
fn toric_values() {
    let gens: [u64; 4] = [1, 0, 0, 1];
    let (mut a, mut b) = (BdivRational::default(), BdivRational::default());
    unsafe {
        let half3 = BdivRational { num: 3, den: 2 };
        assert_eq!(bdiv_toric_hs(3, half3, gens.as_ptr(), 2, 8, &mut a, &mut b), BdivStatus::Ok);
        assert_eq!(a, BdivRational { num: 27, den: 4 });
        let one = BdivRational { num: 1, den: 1 };
        assert_eq!(bdiv_toric_cw(2, one, gens.as_ptr(), 2, 8, &mut a, &mut b), BdivStatus::Ok);
        assert_eq!((a, b), (BdivRational { num: 3, den: 1 }, BdivRational { num: 3, den: 1 }));
        let two = BdivRational { num: 2, den: 1 };
        assert_eq!(bdiv_toric_cw(1, two, gens.as_ptr(), 2, 8, &mut a, &mut b), BdivStatus::Validation);
        let bad = BdivRational { num: 1, den: 0 };
        assert_eq!(bdiv_toric_cw(1, bad, gens.as_ptr(), 2, 8, &mut a, &mut b), BdivStatus::InvalidArgument);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "bdiv.h"

int main(void) {
    BdivRational r;
    char *text = NULL;
    if (bdiv_appendix_degree(3, &r, &text) != BDIV_STATUS_OK) return 1;
    if (r.num != 25 || r.den != 8 || strcmp(text, "25/8") != 0) return 2;
    bdiv_string_free(text);
    BdivTower *t = bdiv_tower_new_p2();
    if (bdiv_tower_register_curve(t, "L", 1) != BDIV_STATUS_OK) return 3;
    const char *names[] = {"L"};
    size_t m = 0;
    if (bdiv_tower_blow_up(t, 0, names, 1, "E", &m) != BDIV_STATUS_OK) return 4;
    if (bdiv_tower_intersect_curves(t, "L", "E", m, &r, NULL) != BDIV_STATUS_OK) return 5;
    if (r.num != 1 || r.den != 1) return 6;
    if (bdiv_tower_intersect_curves(t, "L", "missing", m, &r, NULL) != BDIV_STATUS_VALIDATION) return 7;
    if (bdiv_last_error() == NULL) return 8;
    bdiv_tower_free(t);
    printf("ok\n");
    return 0;
}
"#;

/// Compiles a C client against the generated header and the static library.
#[test]
fn c_client_links_against_header() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/bdiv.h");
    assert!(header.exists(), "header not generated");
    // the test binary lives in target/<profile>/deps; the static library one level up
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libbdiv_ffi.a");
    if !lib.exists() {
        let status = Command::new(env!("CARGO")).args(["build", "-p", "bdiv-ffi"]).status().unwrap();
        assert!(status.success());
    }
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.path().join("client");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("C compiler");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n", "exit {:?}", run.status);
}
