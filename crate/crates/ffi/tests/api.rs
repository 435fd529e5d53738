use std::ffi::CStr;
use std::ptr;

use painleve_ffi::*;

const CASE_TWO: PiiParameters = PiiParameters { sigma: 1.0 / 3.0, tau: -0.2, nu: 0.1, mu: -0.5 };

fn last_error() -> String {
    let p = pii_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Reference(*mut PiiReference);

impl Drop for Reference {
    fn drop(&mut self) {
        unsafe { pii_reference_free(self.0) }
    }
}

fn solve(p: &PiiParameters, nodes: usize) -> Reference {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { pii_reference_solve(p, nodes, 1e-12, &mut h) }, PiiStatus::Ok);
    Reference(h)
}

#[test]
fn airy_at_zero() {
    let mut q = PiiAiryQuad::default();
    assert_eq!(unsafe { pii_airy_eval(0.0, &mut q) }, PiiStatus::Ok);
    assert!((q.ai - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert!((q.ai * q.bi_prime - q.ai_prime * q.bi - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
}

#[test]
fn reference_profile_and_conversion() {
    let r = solve(&CASE_TWO, 513);
    let (mut e0, mut e1, mut kind) = (0.0, 0.0, PiiSolutionType::Null);
    assert_eq!(unsafe { pii_reference_endpoints(r.0, &mut e0, &mut e1, &mut kind) }, PiiStatus::Ok);
    assert_eq!(kind, PiiSolutionType::B);

    let mut len = 0;
    assert_eq!(unsafe { pii_reference_len(r.0, &mut len) }, PiiStatus::Ok);
    assert_eq!(len, 513);
    let (mut x, mut e) = (vec![0.0; len], vec![0.0; len]);
    let status = unsafe { pii_reference_profile(r.0, x.as_mut_ptr(), e.as_mut_ptr(), ptr::null_mut(), len) };
    assert_eq!(status, PiiStatus::Ok);
    assert_eq!((x[0], x[len - 1]), (0.0, 1.0));
    assert_eq!((e[0], e[len - 1]), (e0, e1));

    let status = unsafe { pii_reference_profile(r.0, x.as_mut_ptr(), ptr::null_mut(), ptr::null_mut(), len - 1) };
    assert_eq!(status, PiiStatus::BufferSize);

    let mut inst = PiiInstance::default();
    assert_eq!(unsafe { pii_convert(e0, e1, &CASE_TWO, &mut inst) }, PiiStatus::Ok);
    assert!((inst.a - 1.645).abs() < 5e-3 && (inst.b - 3.554).abs() < 5e-3 && (inst.c - 0.714).abs() < 5e-3);
    assert!((inst.b - inst.a - inst.beta).abs() < 1e-12);
}

#[test]
fn series_handle() {
    let r = solve(&CASE_TWO, 513);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pii_series_new(&CASE_TWO, 513, &mut s) }, PiiStatus::Ok);
    assert_eq!(unsafe { pii_series_extend(s, 20) }, PiiStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { pii_series_len(s, &mut len) }, PiiStatus::Ok);
    assert_eq!(len, 20);

    let (mut d2, mut d20) = (0.0, 0.0);
    assert_eq!(unsafe { pii_series_delta(s, r.0, 2, &mut d2) }, PiiStatus::Ok);
    assert_eq!(unsafe { pii_series_delta(s, r.0, 20, &mut d20) }, PiiStatus::Ok);
    assert!(d20 < 1e-7 && d20 < d2);

    let (mut inst, mut valid) = (PiiInstance::default(), false);
    assert_eq!(unsafe { pii_series_approximant(s, 20, &mut inst, &mut valid) }, PiiStatus::Ok);
    assert!(valid && (inst.a - 1.6456).abs() < 1e-3);

    assert_eq!(unsafe { pii_series_delta(s, r.0, 21, &mut d2) }, PiiStatus::Contract);
    assert!(!last_error().is_empty());
    unsafe { pii_series_free(s) };
}

#[test]
fn direct_series_converges_for_small_solution() {
    let r = solve(&CASE_TWO, 513);
    let mut d = vec![0.0; 30];
    let mut v = vec![PiiVerdict::Undetermined; 30];
    assert_eq!(unsafe { pii_direct_run(r.0, d.as_mut_ptr(), v.as_mut_ptr(), 30) }, PiiStatus::Ok);
    assert!(d[29] < 1e-6);
    assert_eq!(v[29], PiiVerdict::Convergent);
}

#[test]
fn errors_map_to_status_codes() {
    let mut h = ptr::null_mut();
    let bad = PiiParameters { nu: -1.0, ..CASE_TWO };
    assert_eq!(unsafe { pii_reference_solve(&bad, 513, 1e-12, &mut h) }, PiiStatus::Validation);
    assert!(h.is_null());
    assert_eq!(unsafe { pii_reference_solve(&CASE_TWO, 512, 1e-12, &mut h) }, PiiStatus::Validation);
    assert_eq!(unsafe { pii_reference_solve(ptr::null(), 513, 1e-12, &mut h) }, PiiStatus::NullPointer);
    assert_eq!(last_error(), "params is null");

    let mut inst = PiiInstance::default();
    let status = unsafe { pii_convert(0.0, 50.0, &PiiParameters { mu: 2.0, nu: 3.5, ..CASE_TWO }, &mut inst) };
    assert_eq!(status, PiiStatus::InvalidConversion);

    unsafe {
        pii_reference_free(ptr::null_mut());
        pii_series_free(ptr::null_mut());
    }
}
