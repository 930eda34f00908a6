//! C ABI over `mes-core`.
//!
//! Objects are returned as opaque handles that the caller releases with the
//! matching `*_free` function. Every fallible call returns a [`MesStatus`];
//! on failure [`mes_last_error`] describes the error for the calling thread.
//! Strings returned through out-parameters are released with
//! [`mes_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mes_core::eisenstein::{lattice_eval_normalized, mes_sh, LatticeParams, MzvQTensor};
use mes_core::hopf::{coproduct, TensorLinComb};
use mes_core::mzv::{mzv_eval, rational_to_f64};
use mes_core::output::Payload;
use mes_core::qseries::{g_tilde, GshEngine, QSeries};
use mes_core::relations::relation_count_table;
use mes_core::{Composition, Error};
use num_complex::Complex64;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Budget = 3,
    Tolerance = 4,
    Unsupported = 5,
    NotStabilized = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A composition `(n_1, ..., n_r)`.
pub struct MesComposition(Composition);

/// A linear combination of tensors `left ⊗ right`.
pub struct MesTensor(TensorLinComb);

/// A truncated q-series with rational coefficients.
pub struct MesSeries(QSeries);

/// A sum of zeta symbols times rational q-series.
pub struct MesMzvSeries(MzvQTensor);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MesStatus {
    match e {
        Error::InvalidComposition(_) | Error::InvalidWord(_) | Error::InvalidArgument(_) => MesStatus::InvalidArgument,
        Error::Budget(_) => MesStatus::Budget,
        Error::Tolerance(_) => MesStatus::Tolerance,
        Error::Unsupported(_) => MesStatus::Unsupported,
        Error::NotStabilized(_) => MesStatus::NotStabilized,
    }
}

struct Fail(MesStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MesStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            MesStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(MesStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(MesStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the most recent failure on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mes_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mes_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `parts` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_composition_new(parts: *const u32, len: usize, out: *mut *mut MesComposition) -> MesStatus {
    guard(|| {
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(deref(parts)?, len) };
        let c = Composition::new(slice.to_vec())?;
        write_out(out, Box::into_raw(Box::new(MesComposition(c))))
    })
}

/// Parses `"2,3"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_composition_parse(text: *const c_char, out: *mut *mut MesComposition) -> MesStatus {
    guard(|| {
        let s = CStr::from_ptr(deref(text)?)
            .to_str()
            .map_err(|_| Fail(MesStatus::InvalidArgument, "text is not UTF-8".into()))?;
        let c: Composition = s.parse()?;
        write_out(out, Box::into_raw(Box::new(MesComposition(c))))
    })
}

/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mes_composition_depth(c: *const MesComposition) -> usize {
    c.as_ref().map_or(0, |c| c.0.depth())
}

/// # Safety
/// `c` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mes_composition_free(c: *mut MesComposition) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Goncharov coproduct of `I(c)`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_coproduct(c: *const MesComposition, out: *mut *mut MesTensor) -> MesStatus {
    guard(|| {
        let t = coproduct(&deref(c)?.0);
        write_out(out, Box::into_raw(Box::new(MesTensor(t))))
    })
}

/// Number of terms.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mes_tensor_len(t: *const MesTensor) -> usize {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// JSON rendering of the tensor (exact rationals as string pairs).
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_tensor_to_json(t: *const MesTensor, out: *mut *mut c_char) -> MesStatus {
    guard(|| {
        let json = serde_json::to_string(&Payload::tensor(&deref(t)?.0)).expect("payload serializes");
        write_out(out, c_string(json))
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mes_tensor_free(t: *mut MesTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// `g̃_c` through `q^order`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_g_tilde(c: *const MesComposition, order: usize, out: *mut *mut MesSeries) -> MesStatus {
    guard(|| {
        let c = &deref(c)?.0;
        GshEngine::new(order)?;
        write_out(out, Box::into_raw(Box::new(MesSeries(g_tilde(c, order)))))
    })
}

/// `g̃^sh_c` through `q^order`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_g_tilde_sh(c: *const MesComposition, order: usize, out: *mut *mut MesSeries) -> MesStatus {
    guard(|| {
        let c = &deref(c)?.0;
        let s = GshEngine::new(order)?.g_tilde_sh(c)?;
        write_out(out, Box::into_raw(Box::new(MesSeries(s))))
    })
}

/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mes_series_order(s: *const MesSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.order())
}

/// Coefficient of `q^n` as decimal numerator and denominator strings.
///
/// # Safety
/// `s` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_series_coeff(
    s: *const MesSeries,
    n: usize,
    num: *mut *mut c_char,
    den: *mut *mut c_char,
) -> MesStatus {
    guard(|| {
        let s = &deref(s)?.0;
        if n > s.order() {
            return Err(Fail(MesStatus::OutOfRange, format!("q^{n} beyond order {}", s.order())));
        }
        if num.is_null() || den.is_null() {
            return Err(Fail(MesStatus::NullPointer, "null output pointer".into()));
        }
        let c = s.coeff(n);
        write_out(num, c_string(c.numer().to_string()))?;
        write_out(den, c_string(c.denom().to_string()))
    })
}

/// Coefficient of `q^n` rounded to a double.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_series_coeff_f64(s: *const MesSeries, n: usize, out: *mut f64) -> MesStatus {
    guard(|| {
        let s = &deref(s)?.0;
        if n > s.order() {
            return Err(Fail(MesStatus::OutOfRange, format!("q^{n} beyond order {}", s.order())));
        }
        write_out(out, rational_to_f64(s.coeff(n)))
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mes_series_free(s: *mut MesSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `G̃^sh_c` through `q^order`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_mes_sh(c: *const MesComposition, order: usize, out: *mut *mut MesMzvSeries) -> MesStatus {
    guard(|| {
        let c = &deref(c)?.0;
        let t = mes_sh(c, &GshEngine::new(order)?)?;
        write_out(out, Box::into_raw(Box::new(MesMzvSeries(t))))
    })
}

/// Number of distinct zeta symbols.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mes_mzv_series_len(t: *const MesMzvSeries) -> usize {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_mzv_series_to_json(t: *const MesMzvSeries, out: *mut *mut c_char) -> MesStatus {
    guard(|| {
        let json = serde_json::to_string(&Payload::mzv_series(&deref(t)?.0)).expect("payload serializes");
        write_out(out, c_string(json))
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mes_mzv_series_free(t: *mut MesMzvSeries) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// `ζ(c)` for admissible `c` with its absolute error bound.
///
/// # Safety
/// `c` must be a live handle; `value` and `error_bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_mzv_eval(
    c: *const MesComposition,
    tol: f64,
    value: *mut f64,
    error_bound: *mut f64,
) -> MesStatus {
    guard(|| {
        let v = mzv_eval(&deref(c)?.0, tol)?;
        if error_bound.is_null() {
            return Err(Fail(MesStatus::NullPointer, "null output pointer".into()));
        }
        write_out(value, v.value.re)?;
        write_out(error_bound, v.abs_error_bound)
    })
}

/// Normalized truncated lattice sum `G_c(τ) / (-2πi)^{wt}`.
///
/// # Safety
/// `c` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_lattice_eval(
    c: *const MesComposition,
    tau_re: f64,
    tau_im: f64,
    l_cutoff: usize,
    m_cutoff: usize,
    re: *mut f64,
    im: *mut f64,
) -> MesStatus {
    guard(|| {
        let p = LatticeParams::new(Complex64::new(tau_re, tau_im), l_cutoff, m_cutoff)?;
        let v = lattice_eval_normalized(&deref(c)?.0, &p)?;
        if im.is_null() {
            return Err(Fail(MesStatus::NullPointer, "null output pointer".into()));
        }
        write_out(re, v.re)?;
        write_out(im, v.im)
    })
}

/// Number of independent double shuffle relations of the given weight.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mes_relation_count(weight: u32, out: *mut usize) -> MesStatus {
    guard(|| {
        let t = relation_count_table(weight)?;
        write_out(out, t[weight as usize])
    })
}
