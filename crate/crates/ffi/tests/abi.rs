use std::ffi::{CStr, CString};
use std::ptr;

use primroot_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pr_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn primality_and_least_root() {
    let mut b = false;
    assert_eq!(unsafe { pr_is_prime(1_000_000_007, &mut b) }, PrStatus::Ok);
    assert!(b);
    let mut g = 0u64;
    assert_eq!(unsafe { pr_least_primitive_root(7, &mut g) }, PrStatus::Ok);
    assert_eq!(g, 3);
    assert_eq!(unsafe { pr_least_primitive_root(9, &mut g) }, PrStatus::Domain);
    assert!(last_error().contains("not an odd prime"));
    assert_eq!(unsafe { pr_is_prime(5, ptr::null_mut()) }, PrStatus::NullPointer);
}

#[test]
fn context_and_moment_sum() {
    let mut ctx = ptr::null_mut();
    assert_eq!(unsafe { pr_context_new(13, &mut ctx) }, PrStatus::Ok);
    let (mut g, mut w) = (0u64, 0usize);
    unsafe {
        assert_eq!(pr_context_generator(ctx, &mut g), PrStatus::Ok);
        assert_eq!(pr_context_omega(ctx, &mut w), PrStatus::Ok);
    }
    assert_eq!((g, w), (2, 2));
    // Principal character, h = 1, r = 1: every nonzero x contributes 1.
    let (mut s, mut err) = (0.0, 0.0);
    assert_eq!(unsafe { pr_moment_sum(ctx, 0, 1, 1, &mut s, &mut err) }, PrStatus::Ok);
    assert!((s - 12.0).abs() <= err + 1e-12);
    assert_eq!(unsafe { pr_moment_sum(ctx, 12, 1, 1, &mut s, ptr::null_mut()) }, PrStatus::Domain);
    unsafe { pr_context_free(ctx) };
    assert_eq!(unsafe { pr_context_new(15, &mut ctx) }, PrStatus::Domain);
    assert!(ctx.is_null());
}

#[test]
fn certificate_round_trip() {
    let h = CString::new("300000").unwrap();
    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { pr_certify_exact(1_000_000_007, 2, 400, h.as_ptr(), 0, 0, &mut cert) }, PrStatus::Ok);
    let mut v = PrVerdict::Indeterminate;
    assert_eq!(unsafe { pr_certificate_verdict(cert, &mut v) }, PrStatus::Ok);
    assert_eq!(v, PrVerdict::Certified);
    let mut hi = 0.0;
    assert_eq!(unsafe { pr_certificate_h_upper(cert, &mut hi) }, PrStatus::Ok);
    assert_eq!(hi, 300000.0);
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { pr_certificate_to_json(cert, &mut js) }, PrStatus::Ok);
    let text = unsafe { CStr::from_ptr(js) }.to_str().unwrap().to_owned();
    unsafe {
        pr_string_free(js);
        pr_certificate_free(cert);
    }
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["verdict"], "certified");

    let small = CString::new("20000").unwrap();
    assert_eq!(unsafe { pr_certify_exact(1_000_000_007, 2, 400, small.as_ptr(), 0, 0, &mut cert) }, PrStatus::Ok);
    unsafe { pr_certificate_verdict(cert, &mut v) };
    assert_eq!(v, PrVerdict::Failed);
    unsafe { pr_certificate_free(cert) };

    let bad = CString::new("150").unwrap();
    assert_eq!(unsafe { pr_certify_exact(1_000_000_007, 2, 100, bad.as_ptr(), 0, 0, &mut cert) }, PrStatus::Parameter);
    let junk = CString::new("1.5").unwrap();
    assert_eq!(unsafe { pr_certify_exact(1_000_000_007, 2, 100, junk.as_ptr(), 0, 0, &mut cert) }, PrStatus::Parse);
    assert_eq!(unsafe { pr_certify_exact(1_000_000_007, 2, 400, h.as_ptr(), 3, 0, &mut cert) }, PrStatus::InvalidSieve);
}

#[test]
fn optimize_and_brute_force_agree() {
    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { pr_optimize(1_000_000_007, 0, &mut cert) }, PrStatus::Ok);
    let mut hi = 0.0;
    unsafe { pr_certificate_h_upper(cert, &mut hi) };
    let mut g = 0;
    unsafe { pr_least_primitive_root(1_000_000_007, &mut g) };
    assert!((g as f64) < hi);
    unsafe { pr_certificate_free(cert) };
    assert_eq!(unsafe { pr_optimize(9_189_181, 0, &mut cert) }, PrStatus::NotCertified);
    assert!(cert.is_null());
    assert!(last_error().starts_with("infeasible"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/primroot.h")).unwrap();
    for name in [
        "pr_is_prime",
        "pr_least_primitive_root",
        "pr_context_new",
        "pr_moment_sum",
        "pr_certify_exact",
        "pr_certificate_to_json",
        "pr_string_free",
        "typedef struct PrContext PrContext",
        "PR_STATUS_NOT_CERTIFIED",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/primroot.h");
    match std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).status() {
        Ok(s) => assert!(s.success(), "cc rejected the header"),
        Err(_) => eprintln!("no C compiler found; skipping"),
    }
}
