//! C interface to heckealg.
//!
//! Results live behind the opaque [`HkResults`] handle. Every fallible call
//! returns an [`HkStatus`]; the message of the last failure on the calling
//! thread is available from [`hk_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use heckealg::cli::{latex_table, print_summary, recover, store};
use heckealg::dirichlet::{legendre_character, DirichletCharFF};
use heckealg::engine::{hecke_algebras, hecke_algebras_for_form, sturm_bound, AlgebraData, EngineOptions};
use heckealg::ff::make_field;
use heckealg::forms::{a5_form, class_group, dihedral_specs, predicted_level, DihedralOptions, Quintic};
use heckealg::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotLocal = 3,
    InvarianceViolation = 4,
    Unsupported = 5,
    Parse = 6,
    Io = 7,
    Utf8 = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// Opaque list of local factor records.
pub struct HkResults {
    records: Vec<AlgebraData>,
}

/// Numeric summary of one record.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HkInvariants {
    pub level: u64,
    pub weight: u32,
    pub characteristic: u64,
    pub residue_degree: u32,
    pub dimension: usize,
    pub embedding_dimension: usize,
    pub nilpotency_order: usize,
    pub gorenstein_defect: usize,
    pub number_gen_used: usize,
    pub sturm_prime_count: usize,
    pub stop_certified: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HkStatus {
    match e {
        Error::InvalidArgument(_) => HkStatus::InvalidArgument,
        Error::NotLocal => HkStatus::NotLocal,
        Error::InvarianceViolation => HkStatus::InvarianceViolation,
        Error::Unsupported(_) => HkStatus::Unsupported,
        Error::Parse { .. } => HkStatus::Parse,
        Error::Io(_) => HkStatus::Io,
    }
}

fn fail(status: HkStatus, msg: impl Into<String>) -> HkStatus {
    set_error(msg.into());
    status
}

/// Run `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), HkStatus>) -> HkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(HkStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, HkStatus>;
}

impl<T> OrStatus<T> for heckealg::Result<T> {
    fn or_status(self) -> Result<T, HkStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn str_arg<'a>(s: *const c_char, name: &str) -> Result<&'a str, HkStatus> {
    if s.is_null() {
        return Err(fail(HkStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(HkStatus::Utf8, format!("{name} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), HkStatus> {
    if out.is_null() {
        return Err(fail(HkStatus::NullPointer, "output pointer is null"));
    }
    out.write(v);
    Ok(())
}

unsafe fn results<'a>(r: *const HkResults) -> Result<&'a HkResults, HkStatus> {
    r.as_ref().ok_or_else(|| fail(HkStatus::NullPointer, "results handle is null"))
}

fn boxed(records: Vec<AlgebraData>) -> *mut HkResults {
    Box::into_raw(Box::new(HkResults { records }))
}

/// Message of the last failed call on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn hk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Number of primes up to the Sturm bound for weight `k` on Gamma0(`n`).
#[no_mangle]
pub extern "C" fn hk_sturm_prime_count(n: u64, k: u32) -> usize {
    if n == 0 {
        return 0;
    }
    sturm_bound(n, k).primes.len()
}

/// Class number of the imaginary quadratic order of discriminant `d`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hk_class_number(d: i64, out: *mut u64) -> HkStatus {
    guard(|| {
        let g = class_group(d).or_status()?;
        put(out, g.class_number() as u64)
    })
}

/// All local factors for level `n`, weight `k` and a trivial or Legendre character into GF(p^m).
///
/// # Safety
/// `out` must be valid for writes. On success `*out` owns a handle for [`hk_results_free`].
#[no_mangle]
pub unsafe extern "C" fn hk_compute(n: u64, k: u32, p: u64, m: u32, legendre: bool, out: *mut *mut HkResults) -> HkStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(HkStatus::NullPointer, "output pointer is null"));
        }
        let field = make_field(p, m).or_status()?;
        let chi = if legendre { legendre_character(n, &field).or_status()? } else { DirichletCharFF::trivial(n, &field) };
        let r = hecke_algebras(&chi, k, &EngineOptions::default()).or_status()?;
        put(out, boxed(r.algebras))
    })
}

/// Local factors of every dihedral form of level `n` in characteristic `p`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hk_dihedral(n: u64, p: u64, completely_split: bool, out: *mut *mut HkResults) -> HkStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(HkStatus::NullPointer, "output pointer is null"));
        }
        let opts = DihedralOptions { list_of_primes: vec![p], completely_split, ..Default::default() };
        let mut all = Vec::new();
        for s in dihedral_specs(n, &opts).or_status()? {
            let f = s.to_form().or_status()?;
            all.extend(hecke_algebras_for_form(&f, &EngineOptions::default()).or_status()?.algebras);
        }
        put(out, boxed(all))
    })
}

unsafe fn quintic(poly: *const c_char, level: u64) -> Result<Quintic, HkStatus> {
    let q = Quintic::parse(str_arg(poly, "poly")?).or_status()?;
    Ok(if level == 0 { q } else { q.with_level(level) })
}

/// Predicted level of the icosahedral form of the quintic "c0,...,c5".
///
/// # Safety
/// `poly` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hk_a5_level(poly: *const c_char, out: *mut u64) -> HkStatus {
    guard(|| {
        let q = quintic(poly, 0)?;
        put(out, predicted_level(&q).or_status()?)
    })
}

/// Local factors of the icosahedral form of a quintic; `level` 0 predicts it.
///
/// # Safety
/// `poly` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hk_a5(poly: *const c_char, level: u64, out: *mut *mut HkResults) -> HkStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(HkStatus::NullPointer, "output pointer is null"));
        }
        let spec = a5_form(&quintic(poly, level)?).or_status()?;
        put(out, boxed(hecke_algebras_for_form(&spec, &EngineOptions::default()).or_status()?.algebras))
    })
}

/// Read a storage file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hk_recover(path: *const c_char, out: *mut *mut HkResults) -> HkStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(HkStatus::NullPointer, "output pointer is null"));
        }
        let recs = recover(Path::new(str_arg(path, "path")?)).or_status()?;
        put(out, boxed(recs))
    })
}

/// Number of records; 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hk_results_len(r: *const HkResults) -> usize {
    r.as_ref().map_or(0, |r| r.records.len())
}

/// # Safety
/// `r` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hk_results_get(r: *const HkResults, i: usize, out: *mut HkInvariants) -> HkStatus {
    guard(|| {
        let r = results(r)?;
        let Some(a) = r.records.get(i) else {
            return Err(fail(HkStatus::OutOfRange, format!("index {i} out of range {}", r.records.len())));
        };
        put(
            out,
            HkInvariants {
                level: a.level,
                weight: a.weight,
                characteristic: a.characteristic,
                residue_degree: a.residue_degree,
                dimension: a.dimension,
                embedding_dimension: a.embedding_dimension,
                nilpotency_order: a.nilpotency_order,
                gorenstein_defect: a.gorenstein_defect,
                number_gen_used: a.number_gen_used,
                sturm_prime_count: a.sturm_prime_count,
                stop_certified: a.stop_certified,
            },
        )
    })
}

/// Human readable summary; free with [`hk_string_free`]. NULL on error.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hk_results_summary(r: *const HkResults) -> *mut c_char {
    let mut s = ptr::null_mut();
    let st = guard(|| {
        let r = results(r)?;
        s = CString::new(print_summary(&r.records)).unwrap_or_default().into_raw();
        Ok(())
    });
    if st == HkStatus::Ok {
        s
    } else {
        ptr::null_mut()
    }
}

/// Append the records to a storage file.
///
/// # Safety
/// `r` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hk_results_store(r: *const HkResults, path: *const c_char) -> HkStatus {
    guard(|| {
        let r = results(r)?;
        store(Path::new(str_arg(path, "path")?), &r.records).or_status()
    })
}

/// Write the default LaTeX longtable.
///
/// # Safety
/// `r` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hk_results_latex(r: *const HkResults, path: *const c_char) -> HkStatus {
    guard(|| {
        let r = results(r)?;
        latex_table(&r.records, Path::new(str_arg(path, "path")?), None).or_status()
    })
}

/// # Safety
/// `r` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hk_results_free(r: *mut HkResults) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
