//! C ABI over `painleve-core`.
//!
//! Every function returns a [`PiiStatus`]; results come back through out
//! pointers. Solutions and series live behind opaque handles that the caller
//! frees with the matching `*_free`. After a non-OK status,
//! [`pii_last_error_message`] describes the failure on the calling thread.
//! Panics never cross the boundary; they become `PII_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use painleve_core::{
    airy_eval, convert, convert_profile, direct_partial_sums, solve_reference, DirectSeriesState, Error, Grid,
    Parameters, ReferenceSolution, SeriesState, SolutionType, Verdict,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiiStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Validation = 3,
    Contract = 4,
    Convergence = 5,
    DegenerateBasis = 6,
    Classification = 7,
    InvalidConversion = 8,
    /// Output buffer length does not match what the call produces.
    BufferSize = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiiSolutionType {
    A = 0,
    B = 1,
    Null = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiiVerdict {
    Undetermined = 0,
    Convergent = 1,
    Divergent = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiiParameters {
    pub sigma: f64,
    pub tau: f64,
    pub nu: f64,
    pub mu: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PiiAiryQuad {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

/// Painlevé II data: interval `[a, b]`, constant `c`, and the scale and
/// shift of `z = beta * x + gamma`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PiiInstance {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Converged solution of the supplementary problem.
pub struct PiiReference {
    inner: ReferenceSolution,
}

/// Perturbation series, extended on demand.
pub struct PiiSeries {
    inner: SeriesState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(PiiStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain { .. } => PiiStatus::Domain,
            Error::Validation(_) => PiiStatus::Validation,
            Error::Contract(_) => PiiStatus::Contract,
            Error::Convergence { .. } => PiiStatus::Convergence,
            Error::DegenerateBasis { .. } => PiiStatus::DegenerateBasis,
            Error::Classification(_) => PiiStatus::Classification,
            Error::InvalidConversion { .. } => PiiStatus::InvalidConversion,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PiiStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PiiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PiiStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PiiStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, want: usize, what: &str) -> Result<Option<&'a mut [f64]>, Fail> {
    if p.is_null() {
        return Ok(None);
    }
    if len != want {
        return Err(Fail(PiiStatus::BufferSize, format!("{what}: length {len}, need {want}")));
    }
    Ok(Some(std::slice::from_raw_parts_mut(p, len)))
}

fn params(p: &PiiParameters) -> Result<Parameters, Fail> {
    Ok(Parameters::new(p.sigma, p.tau, p.nu, p.mu)?)
}

fn instance_out(i: painleve_core::PiiInstance) -> PiiInstance {
    PiiInstance { a: i.a, b: i.b, c: i.c, beta: i.beta, gamma: i.gamma }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn pii_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `Ai`, `Bi` and derivatives at `t`, `|t| <= 30`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `PiiAiryQuad`.
#[no_mangle]
pub unsafe extern "C" fn pii_airy_eval(t: f64, out: *mut PiiAiryQuad) -> PiiStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let q = airy_eval(t)?;
        *out = PiiAiryQuad { ai: q.ai, bi: q.bi, ai_prime: q.ai_prime, bi_prime: q.bi_prime };
        Ok(())
    })
}

/// Solves the supplementary problem on a uniform grid of `grid_size` nodes
/// (odd, at least 257). On success `*out` owns a new handle.
///
/// # Safety
/// `p` must point to a `PiiParameters`; `out` to writable handle storage.
#[no_mangle]
pub unsafe extern "C" fn pii_reference_solve(
    p: *const PiiParameters,
    grid_size: usize,
    tol: f64,
    out: *mut *mut PiiReference,
) -> PiiStatus {
    guard(|| {
        let p = params(deref(p, "params")?)?;
        let out = deref_mut(out, "out")?;
        let grid = Grid::shared(grid_size)?;
        let inner = solve_reference(&p, &grid, tol)?;
        *out = Box::into_raw(Box::new(PiiReference { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from `pii_reference_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pii_reference_free(h: *mut PiiReference) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; the out pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn pii_reference_endpoints(
    h: *const PiiReference,
    e0: *mut f64,
    e1: *mut f64,
    kind: *mut PiiSolutionType,
) -> PiiStatus {
    guard(|| {
        let r = &deref(h, "handle")?.inner;
        if let Some(e0) = e0.as_mut() {
            *e0 = r.e0;
        }
        if let Some(e1) = e1.as_mut() {
            *e1 = r.e1;
        }
        if let Some(k) = kind.as_mut() {
            *k = match r.solution_type {
                SolutionType::TypeA => PiiSolutionType::A,
                SolutionType::TypeB => PiiSolutionType::B,
                SolutionType::Null => PiiSolutionType::Null,
            };
        }
        Ok(())
    })
}

/// Node count of the solution grid.
///
/// # Safety
/// `h` must be a live handle; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn pii_reference_len(h: *const PiiReference, len: *mut usize) -> PiiStatus {
    guard(|| {
        *deref_mut(len, "len")? = deref(h, "handle")?.inner.profile.grid().len();
        Ok(())
    })
}

/// Copies nodes, values and derivatives. Each non-null buffer must hold
/// exactly `len` doubles, the grid node count.
///
/// # Safety
/// `h` must be a live handle; non-null buffers must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pii_reference_profile(
    h: *const PiiReference,
    x: *mut f64,
    e: *mut f64,
    e_prime: *mut f64,
    len: usize,
) -> PiiStatus {
    guard(|| {
        let prof = &deref(h, "handle")?.inner.profile;
        let n = prof.grid().len();
        let src: [&[f64]; 3] = [prof.grid().nodes(), prof.values(), prof.derivs()];
        for (buf, (name, s)) in [x, e, e_prime].into_iter().zip(["x", "e", "e_prime"].into_iter().zip(src)) {
            if let Some(dst) = out_slice(buf, len, n, name)? {
                dst.copy_from_slice(s);
            }
        }
        Ok(())
    })
}

/// Maps endpoint values to Painlevé II data.
///
/// # Safety
/// `p` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pii_convert(e0: f64, e1: f64, p: *const PiiParameters, out: *mut PiiInstance) -> PiiStatus {
    guard(|| {
        let p = params(deref(p, "params")?)?;
        let out = deref_mut(out, "out")?;
        *out = instance_out(convert(e0, e1, &p)?);
        Ok(())
    })
}

/// Creates an empty series on a grid of `grid_size` nodes.
///
/// # Safety
/// `p` must point to a `PiiParameters`; `out` to writable handle storage.
#[no_mangle]
pub unsafe extern "C" fn pii_series_new(p: *const PiiParameters, grid_size: usize, out: *mut *mut PiiSeries) -> PiiStatus {
    guard(|| {
        let p = params(deref(p, "params")?)?;
        let out = deref_mut(out, "out")?;
        let grid = Grid::shared(grid_size)?;
        let inner = SeriesState::new(&p, &grid)?;
        *out = Box::into_raw(Box::new(PiiSeries { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from `pii_series_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pii_series_free(h: *mut PiiSeries) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Builds terms up to order `up_to` (at most 500).
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pii_series_extend(h: *mut PiiSeries, up_to: usize) -> PiiStatus {
    guard(|| {
        deref_mut(h, "handle")?.inner.extend(up_to)?;
        Ok(())
    })
}

/// Number of terms built so far.
///
/// # Safety
/// `h` must be a live handle; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn pii_series_len(h: *const PiiSeries, len: *mut usize) -> PiiStatus {
    guard(|| {
        *deref_mut(len, "len")? = deref(h, "handle")?.inner.len();
        Ok(())
    })
}

/// Discrepancy `max |S_n - E| + max |S_n' - E'|` of the order-`n` partial sum
/// against a reference solved on the same grid.
///
/// # Safety
/// `h` and `r` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pii_series_delta(
    h: *const PiiSeries,
    r: *const PiiReference,
    n: usize,
    out: *mut f64,
) -> PiiStatus {
    guard(|| {
        let s = &deref(h, "series")?.inner;
        let r = &deref(r, "reference")?.inner;
        *deref_mut(out, "out")? = s.delta_n(r, n)?;
        Ok(())
    })
}

/// Painlevé II data of the order-`n` approximant. `*valid` is false when the
/// partial sums give no real interval; `*out` is then left untouched.
///
/// # Safety
/// `h` must be a live handle; `out` and `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn pii_series_approximant(
    h: *const PiiSeries,
    n: usize,
    out: *mut PiiInstance,
    valid: *mut bool,
) -> PiiStatus {
    guard(|| {
        let s = &deref(h, "handle")?.inner;
        let out = deref_mut(out, "out")?;
        let valid = deref_mut(valid, "valid")?;
        match painleve_core::extraordinary::approximant_instance(s, n)? {
            Some(i) => {
                *out = instance_out(i);
                *valid = true;
            }
            None => *valid = false,
        }
        Ok(())
    })
}

/// Runs the direct Painlevé II series for the instance converted from `r`
/// through order `len`, writing one discrepancy and verdict per order.
///
/// # Safety
/// `r` must be a live handle; `discrepancies` and `verdicts` must be
/// writable for `len` elements (either may be null).
#[no_mangle]
pub unsafe extern "C" fn pii_direct_run(
    r: *const PiiReference,
    discrepancies: *mut f64,
    verdicts: *mut PiiVerdict,
    len: usize,
) -> PiiStatus {
    guard(|| {
        let r = &deref(r, "reference")?.inner;
        let inst = convert(r.e0, r.e1, &r.params)?;
        let exact = convert_profile(&r.profile, &inst);
        let mut state = DirectSeriesState::new(inst, r.profile.grid())?;
        let report = direct_partial_sums(&mut state, &exact, len)?;
        if let Some(d) = out_slice(discrepancies, len, report.discrepancies.len(), "discrepancies")? {
            d.copy_from_slice(&report.discrepancies);
        }
        if !verdicts.is_null() {
            let v = std::slice::from_raw_parts_mut(verdicts, len);
            for (dst, src) in v.iter_mut().zip(&report.verdicts) {
                *dst = match src {
                    Verdict::Undetermined => PiiVerdict::Undetermined,
                    Verdict::Convergent => PiiVerdict::Convergent,
                    Verdict::Divergent => PiiVerdict::Divergent,
                };
            }
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn status_and_message() {
        let mut q = PiiAiryQuad::default();
        assert_eq!(unsafe { pii_airy_eval(0.0, &mut q) }, PiiStatus::Ok);
        assert!(pii_last_error_message().is_null());
        assert_eq!(unsafe { pii_airy_eval(40.0, &mut q) }, PiiStatus::Domain);
        let msg = unsafe { CStr::from_ptr(pii_last_error_message()) }.to_str().unwrap();
        assert!(msg.contains("40"), "{msg}");
        assert_eq!(unsafe { pii_airy_eval(0.0, ptr::null_mut()) }, PiiStatus::NullPointer);
    }

    #[test]
    fn panics_are_caught() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, PiiStatus::Panic);
        let msg = unsafe { CStr::from_ptr(pii_last_error_message()) }.to_str().unwrap();
        assert_eq!(msg, "panic: boom");
    }
}
