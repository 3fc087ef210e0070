//! C ABI over `bdiv`.
//!
//! Towers are opaque handles created by `bdiv_tower_new_p2` and released
//! with `bdiv_tower_free`. Every fallible call returns a [`BdivStatus`];
//! on failure the message is available from `bdiv_last_error` on the same
//! thread. Rationals come back as a [`BdivRational`] pair and, when the
//! caller passes a non-null `text` pointer, as an owned `"num/den"` string
//! to be released with `bdiv_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bdiv::analysis::Normalization;
use bdiv::appendix::{build_step2, step2_degree_closed_form};
use bdiv::bdivisor::{self, ReductionMode, TowerBDiv};
use bdiv::h0::Budget;
use bdiv::rat::{to_exact_string, to_i64_pair};
use bdiv::toric::{self, MonomialIdeal2D, PLMetricData};
use bdiv::{CenterSpec, Error, ModelId, Rat, Tower};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BdivStatus {
    Ok = 0,
    Other = 1,
    Validation = 2,
    Budget = 3,
    ReductionRefused = 4,
    NotPseudoeffective = 5,
    Inconsistent = 6,
    OutOfRange = 7,
    /// A required pointer argument was null or a string was not UTF-8.
    InvalidArgument = 8,
    /// The value is exact in `text` but does not fit the `i64` pair.
    Overflow = 9,
    Panic = 10,
}

/// `num / den` with `den > 0`.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct BdivRational {
    pub num: i64,
    pub den: i64,
}

/// Volume convention selector for `bdiv_appendix_volume`.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BdivNormalization {
    /// `lim h0(lD) / (l^2 / 2)`.
    WithFactorial = 0,
    /// `lim h0(lD) / l^2`.
    WithoutFactorial = 1,
}

/// Opaque tower handle.
pub struct BdivTower {
    inner: Tower,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BdivStatus {
    match e {
        Error::Validation(_) => BdivStatus::Validation,
        Error::Budget { .. } => BdivStatus::Budget,
        Error::ReductionRefused(_) => BdivStatus::ReductionRefused,
        Error::NotPseudoeffective(_) => BdivStatus::NotPseudoeffective,
        Error::Inconsistent(_) => BdivStatus::Inconsistent,
        Error::OutOfRange { .. } => BdivStatus::OutOfRange,
    }
}

enum Fail {
    Lib(Error),
    Arg(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<BdivStatus, Fail>) -> BdivStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Arg(m))) => {
            set_error(m.to_string());
            BdivStatus::InvalidArgument
        }
        Err(_) => {
            set_error("panic inside bdiv".into());
            BdivStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Arg(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Arg(what))
}

/// Writes `r` to `out` and, if `text` is non-null, an owned exact string.
unsafe fn write_rat(r: &Rat, out: *mut BdivRational, text: *mut *mut c_char) -> Result<BdivStatus, Fail> {
    if out.is_null() {
        return Err(Fail::Arg("output pointer is null"));
    }
    if !text.is_null() {
        *text = CString::new(to_exact_string(r)).unwrap().into_raw();
    }
    match to_i64_pair(r) {
        Some((num, den)) => {
            *out = BdivRational { num, den };
            Ok(BdivStatus::Ok)
        }
        None => {
            *out = BdivRational::default();
            set_error(format!("{} does not fit in 64-bit integers", to_exact_string(r)));
            Ok(BdivStatus::Overflow)
        }
    }
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn bdiv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through a `text` out-parameter.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn bdiv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A tower with the projective plane as its only model.
#[no_mangle]
pub extern "C" fn bdiv_tower_new_p2() -> *mut BdivTower {
    Box::into_raw(Box::new(BdivTower { inner: Tower::projective_plane() }))
}

/// # Safety
/// `t` must be null or a handle from `bdiv_tower_new_p2` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bdiv_tower_free(t: *mut BdivTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bdiv_tower_model_count(t: *const BdivTower) -> usize {
    t.as_ref().map_or(0, |t| t.inner.model_count())
}

/// Registers a base curve of degree `degree` (class `degree * H`).
///
/// # Safety
/// `t` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bdiv_tower_register_curve(t: *mut BdivTower, name: *const c_char, degree: i64) -> BdivStatus {
    guard(|| {
        let t = t.as_mut().ok_or(Fail::Arg("tower handle is null"))?;
        let name = str_arg(name, "curve name is null or not UTF-8")?;
        let base = t.inner.base_model();
        let class = t.inner.class_i64(base, &[degree])?;
        t.inner.register_curve(name, &class)?;
        Ok(BdivStatus::Ok)
    })
}

/// Blows up the point of `model` where the `n` named curves meet. The new
/// exceptional curve is called `exceptional` (or `E<index>` when null) and
/// the new model id is written to `out_model`.
///
/// # Safety
/// `t` must be a live handle, `curves` must point to `n` NUL-terminated
/// strings and `out_model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bdiv_tower_blow_up(
    t: *mut BdivTower,
    model: usize,
    curves: *const *const c_char,
    n: usize,
    exceptional: *const c_char,
    out_model: *mut usize,
) -> BdivStatus {
    guard(|| {
        let t = t.as_mut().ok_or(Fail::Arg("tower handle is null"))?;
        if curves.is_null() || out_model.is_null() {
            return Err(Fail::Arg("null curve list or output pointer"));
        }
        let names = (0..n)
            .map(|i| str_arg(*curves.add(i), "curve name is null or not UTF-8"))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = CenterSpec::new(ModelId(model), &names);
        let m = if exceptional.is_null() {
            t.inner.blow_up(&spec)?
        } else {
            t.inner.blow_up_named(&spec, str_arg(exceptional, "exceptional name is not UTF-8")?)?
        };
        *out_model = m.0;
        Ok(BdivStatus::Ok)
    })
}

/// Intersection number of the strict transforms of two curves on `model`.
///
/// # Safety
/// `t` must be a live handle, `a` and `b` NUL-terminated strings, `out`
/// writable, and `text` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bdiv_tower_intersect_curves(
    t: *const BdivTower,
    a: *const c_char,
    b: *const c_char,
    model: usize,
    out: *mut BdivRational,
    text: *mut *mut c_char,
) -> BdivStatus {
    guard(|| {
        let t = t.as_ref().ok_or(Fail::Arg("tower handle is null"))?;
        let a = str_arg(a, "curve name is null or not UTF-8")?;
        let b = str_arg(b, "curve name is null or not UTF-8")?;
        let v = t.inner.intersect_curves(a, b, ModelId(model))?;
        write_rat(&v, out, text)
    })
}

/// `(D'_k)^2` on the Step-2 tower with `k` rounds, computed on the tower.
///
/// # Safety
/// `out` must be writable and `text` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bdiv_appendix_degree(k: usize, out: *mut BdivRational, text: *mut *mut c_char) -> BdivStatus {
    guard(|| {
        let a = build_step2(k)?;
        let lvl = a.level(k)?;
        let v = a.tower.intersect(&lvl.divisor, &lvl.divisor)?;
        if v != step2_degree_closed_form(k) {
            return Err(Error::Inconsistent(format!("degree {v} disagrees with 3 + 2^-{k}")).into());
        }
        write_rat(&v, out, text)
    })
}

/// Volume of the limit b-divisor of the Step-2 tower (line reduction
/// checked on `k` rounds, `k >= 1`).
///
/// # Safety
/// `out` must be writable and `text` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bdiv_appendix_volume(
    k: usize,
    normalization: BdivNormalization,
    out: *mut BdivRational,
    text: *mut *mut c_char,
) -> BdivStatus {
    guard(|| {
        let b = TowerBDiv::appendix(k)?;
        let r = bdivisor::volume_via_line_reduction(&b, "L", k, ReductionMode::Strict)?;
        let n = match normalization {
            BdivNormalization::WithFactorial => Normalization::WithFactorial,
            BdivNormalization::WithoutFactorial => Normalization::WithoutFactorial,
        };
        write_rat(&r.volume_in(n), out, text)
    })
}

unsafe fn metric_arg(d: u64, c: BdivRational, gens: *const u64, n: usize) -> Result<PLMetricData, Fail> {
    if gens.is_null() || n == 0 {
        return Err(Fail::Arg("ideal generator list is null or empty"));
    }
    if c.den <= 0 {
        return Err(Fail::Arg("weight denominator must be positive"));
    }
    let flat = std::slice::from_raw_parts(gens, 2 * n);
    let g: Vec<[u64; 2]> = flat.chunks(2).map(|p| [p[0], p[1]]).collect();
    let ideal = MonomialIdeal2D::new(&g)?;
    Ok(PLMetricData::new(d, ideal, Rat::new(c.num.into(), c.den.into()))?)
}

/// Hilbert-Samuel check for `c log |I|` on `O(dH)`: writes the exact target
/// `(dH - c D_I)^2` and `s_{k_max}`. `gens` holds `n` exponent pairs.
///
/// # Safety
/// `gens` must point to `2 n` values; `target` and `s_last` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bdiv_toric_hs(
    d: u64,
    c: BdivRational,
    gens: *const u64,
    n: usize,
    k_max: u64,
    target: *mut BdivRational,
    s_last: *mut BdivRational,
) -> BdivStatus {
    guard(|| {
        let m = metric_arg(d, c, gens, n)?;
        let h = toric::hs_check(&m, k_max, &Budget::default())?;
        let s1 = write_rat(&h.target, target, ptr::null_mut())?;
        let s2 = write_rat(&h.rows.last().unwrap().s, s_last, ptr::null_mut())?;
        Ok(if s1 == BdivStatus::Ok { s2 } else { s1 })
    })
}

/// Chern-Weil check: the b-divisor degree and the toric degree, equal on success.
///
/// # Safety
/// `gens` must point to `2 n` values; `bdeg` and `eqalg` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bdiv_toric_cw(
    d: u64,
    c: BdivRational,
    gens: *const u64,
    n: usize,
    k_max: u64,
    bdeg: *mut BdivRational,
    eqalg: *mut BdivRational,
) -> BdivStatus {
    guard(|| {
        let m = metric_arg(d, c, gens, n)?;
        let r = toric::chern_weil_check(&m, k_max, &Budget::default())?;
        let s1 = write_rat(&r.bdeg, bdeg, ptr::null_mut())?;
        let s2 = write_rat(&r.eqalg, eqalg, ptr::null_mut())?;
        Ok(if s1 == BdivStatus::Ok { s2 } else { s1 })
    })
}
