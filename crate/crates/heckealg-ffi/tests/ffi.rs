use std::ffi::{CStr, CString};
use std::ptr;

use heckealg_ffi::*;

fn last_error() -> String {
    let p = hk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn invariants(r: *const HkResults) -> Vec<HkInvariants> {
    let n = unsafe { hk_results_len(r) };
    (0..n)
        .map(|i| {
            let mut inv = HkInvariants::default();
            assert_eq!(unsafe { hk_results_get(r, i, &mut inv) }, HkStatus::Ok);
            inv
        })
        .collect()
}

#[test]
fn compute_level_431() {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { hk_compute(431, 2, 2, 1, false, &mut r) }, HkStatus::Ok);
    let inv = invariants(r);
    let hit = inv.iter().find(|a| a.dimension == 4 && a.gorenstein_defect == 2).expect("defect 2 factor");
    assert_eq!((hit.residue_degree, hit.embedding_dimension, hit.nilpotency_order), (1, 3, 1));
    assert_eq!(hit.sturm_prime_count, 20);
    assert!(hit.stop_certified);

    let s = unsafe { hk_results_summary(r) };
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    assert!(text.contains("431"));
    unsafe { hk_string_free(s) };

    let mut out = HkInvariants::default();
    assert_eq!(unsafe { hk_results_get(r, inv.len(), &mut out) }, HkStatus::OutOfRange);
    assert!(last_error().contains("out of range"));
    unsafe { hk_results_free(r) };
}

#[test]
fn store_recover_latex() {
    let dir = tempfile::tempdir().unwrap();
    let store = CString::new(dir.path().join("s.txt").to_str().unwrap()).unwrap();
    let tex = CString::new(dir.path().join("t.tex").to_str().unwrap()).unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { hk_compute(229, 2, 2, 1, false, &mut r) }, HkStatus::Ok);
    assert_eq!(unsafe { hk_results_store(r, store.as_ptr()) }, HkStatus::Ok);
    assert_eq!(unsafe { hk_results_latex(r, tex.as_ptr()) }, HkStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { hk_recover(store.as_ptr(), &mut back) }, HkStatus::Ok);
    assert_eq!(invariants(back), invariants(r));
    assert!(std::fs::read_to_string(dir.path().join("t.tex")).unwrap().contains("longtable"));
    unsafe {
        hk_results_free(r);
        hk_results_free(back);
    }
}

#[test]
fn dihedral_and_icosahedral() {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { hk_dihedral(431, 2, true, &mut r) }, HkStatus::Ok);
    assert!(invariants(r).iter().any(|a| a.dimension == 4 && a.gorenstein_defect == 2));
    unsafe { hk_results_free(r) };

    let poly = CString::new("344,3106,-1795,-780,-1,1").unwrap();
    let mut level = 0;
    assert_eq!(unsafe { hk_a5_level(poly.as_ptr(), &mut level) }, HkStatus::Ok);
    assert_eq!(level, 1951);
    let bad = CString::new("1,0,0,x,0,1").unwrap();
    assert_ne!(unsafe { hk_a5_level(bad.as_ptr(), &mut level) }, HkStatus::Ok);
}

#[test]
fn error_codes() {
    let mut h = 0u64;
    assert_eq!(unsafe { hk_class_number(-23, &mut h) }, HkStatus::Ok);
    assert_eq!(h, 3);
    assert_eq!(unsafe { hk_class_number(5, &mut h) }, HkStatus::Unsupported);
    assert_eq!(unsafe { hk_class_number(-23, ptr::null_mut()) }, HkStatus::NullPointer);

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { hk_compute(11, 2, 4, 1, false, &mut r) }, HkStatus::InvalidArgument);
    assert!(r.is_null());
    assert_eq!(unsafe { hk_compute(11, 2, 2, 1, false, ptr::null_mut()) }, HkStatus::NullPointer);
    assert_eq!(unsafe { hk_recover(ptr::null(), &mut r) }, HkStatus::NullPointer);
    let missing = CString::new("/nonexistent/dir/store.txt").unwrap();
    assert_eq!(unsafe { hk_recover(missing.as_ptr(), &mut r) }, HkStatus::Io);

    assert_eq!(unsafe { hk_results_len(ptr::null()) }, 0);
    assert!(unsafe { hk_results_summary(ptr::null()) }.is_null());
    unsafe {
        hk_results_free(ptr::null_mut());
        hk_string_free(ptr::null_mut());
    }
    assert_eq!(hk_sturm_prime_count(431, 2), 20);
    assert_eq!(hk_sturm_prime_count(0, 2), 0);
    let v = unsafe { CStr::from_ptr(hk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/heckealg.h")).unwrap();
    for name in [
        "hk_last_error",
        "hk_version",
        "hk_sturm_prime_count",
        "hk_class_number",
        "hk_compute",
        "hk_dihedral",
        "hk_a5_level",
        "hk_a5",
        "hk_recover",
        "hk_results_len",
        "hk_results_get",
        "hk_results_summary",
        "hk_results_store",
        "hk_results_latex",
        "hk_results_free",
        "hk_string_free",
        "HK_STATUS_OK",
        "typedef struct HkResults HkResults",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
