//! Ordinary perturbation series of Painlevé II about `y = 0` on a fixed
//! interval, with `C` as the expansion parameter:
//!
//! ```text
//! y_n'' - z y_n = S_n,   y_n'(a) = 0 = y_n'(b)
//! S_1 = C,   S_n = 2 sum_{i+j+k=n} y_i y_j y_k
//! ```
//!
//! Each order is solved with `Ai`, `Bi` (Wronskian `1/pi`) on the mesh of
//! `[0, 1]` mapped affinely onto `[a, b]`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extraordinary::{PiiInstance, PiiProfile};
use crate::mesh::{cumulative_integral, Grid};
use crate::specfun::{airy_eval, AiryQuad};

/// Discrepancy at or below which the series counts as converged.
pub const CONVERGED_BELOW: f64 = 1e-6;
/// Growth factor and window length of the divergence detector.
pub const GROWTH_FACTOR: f64 = 10.0;
pub const GROWTH_WINDOW: usize = 10;
/// Orders past this are not inspected for divergence.
pub const DETECTOR_CAP: usize = 60;
const DEGENERATE_DET: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct DirectTerm {
    pub order: usize,
    pub y: Vec<f64>,
    pub y_prime: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DirectSeriesState {
    instance: PiiInstance,
    grid: Arc<Grid>,
    z: Vec<f64>,
    airy: Vec<AiryQuad>,
    terms: Vec<DirectTerm>,
    // [y^2]_m indexed by m; entries 0 and 1 unused
    squares: Vec<Vec<f64>>,
}

impl DirectSeriesState {
    pub fn new(instance: PiiInstance, grid: &Arc<Grid>) -> Result<Self> {
        if !(instance.b > instance.a) || !instance.c.is_finite() {
            return Err(Error::Validation(format!(
                "interval [{}, {}] with C = {} is not usable",
                instance.a, instance.b, instance.c
            )));
        }
        let len = instance.b - instance.a;
        let z: Vec<f64> = grid.nodes().iter().map(|&x| instance.a + len * x).collect();
        let airy = z.iter().map(|&t| airy_eval(t)).collect::<Result<Vec<_>>>()?;
        let (first, last) = (airy[0], airy[airy.len() - 1]);
        let det = first.ai_prime * last.bi_prime - first.bi_prime * last.ai_prime;
        if det.abs() < DEGENERATE_DET {
            return Err(Error::DegenerateBasis { det });
        }
        Ok(Self {
            instance,
            grid: grid.clone(),
            z,
            airy,
            terms: Vec::new(),
            squares: vec![Vec::new(), Vec::new()],
        })
    }

    pub fn instance(&self) -> &PiiInstance {
        &self.instance
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn terms(&self) -> &[DirectTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Forcing `S_n` on the grid; needs orders `1..n-1`.
    pub fn forcing(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 || self.terms.len() + 1 < n {
            return Err(Error::Contract(format!(
                "direct forcing of order {n} needs orders below it, state holds {}",
                self.terms.len()
            )));
        }
        let len = self.z.len();
        if n == 1 {
            return Ok(vec![self.instance.c; len]);
        }
        let mut s = vec![0.0; len];
        for k in 1..=n.saturating_sub(2) {
            let y = &self.terms[k - 1].y;
            let sq = &self.squares[n - k];
            for i in 0..len {
                s[i] += 2.0 * y[i] * sq[i];
            }
        }
        Ok(s)
    }

    /// Solves for order `n` given its forcing.
    pub fn solve(&self, s: &[f64], order: usize) -> Result<DirectTerm> {
        self.grid.check_len(s.len())?;
        let jac = self.instance.b - self.instance.a;
        let q = &self.airy;
        let sa: Vec<f64> = s.iter().zip(q).map(|(v, w)| v * w.ai).collect();
        let sb: Vec<f64> = s.iter().zip(q).map(|(v, w)| v * w.bi).collect();
        let ia = cumulative_integral(&sa, &self.grid)?;
        let ib = cumulative_integral(&sb, &self.grid)?;
        let m = s.len() - 1;
        let (first, last) = (q[0], q[m]);
        let det = first.ai_prime * last.bi_prime - first.bi_prime * last.ai_prime;
        let end_slope = PI * jac * (last.bi_prime * ia[m] - last.ai_prime * ib[m]);
        let d_a = first.bi_prime * end_slope / det;
        let d_b = -first.ai_prime * end_slope / det;
        let mut y = Vec::with_capacity(m + 1);
        let mut y_prime = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let (a, b) = (PI * jac * ia[i], PI * jac * ib[i]);
            y.push(q[i].bi * a - q[i].ai * b + d_a * q[i].ai + d_b * q[i].bi);
            y_prime.push(q[i].bi_prime * a - q[i].ai_prime * b + d_a * q[i].ai_prime + d_b * q[i].bi_prime);
        }
        Ok(DirectTerm { order, y, y_prime })
    }

    /// Builds order `len + 1`. Returns `false` without storing anything if the
    /// new term is not finite.
    pub fn push_next(&mut self) -> Result<bool> {
        let n = self.terms.len() + 1;
        let s = self.forcing(n)?;
        let term = self.solve(&s, n)?;
        if !term.y.iter().chain(&term.y_prime).all(|v| v.is_finite()) {
            return Ok(false);
        }
        self.terms.push(term);
        let m = n + 1;
        let mut sq = vec![0.0; self.z.len()];
        for i in 1..m {
            let (u, v) = (&self.terms[i - 1].y, &self.terms[m - i - 1].y);
            for (acc, (p, q)) in sq.iter_mut().zip(u.iter().zip(v)) {
                *acc += p * q;
            }
        }
        self.squares.push(sq);
        Ok(true)
    }

    /// `y^(n) = y_1 + ... + y_n`.
    pub fn partial_sum(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 || n > self.terms.len() {
            return Err(Error::Contract(format!("order {n} requested, state holds {}", self.terms.len())));
        }
        let mut out = vec![0.0; self.z.len()];
        for t in &self.terms[..n] {
            for (acc, v) in out.iter_mut().zip(&t.y) {
                *acc += v;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Undetermined,
    Convergent,
    Divergent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Undetermined => "undetermined",
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectReport {
    /// `sup |y^(n) - y|` for `n = 1, 2, ...`; infinity from the first overflowed order on.
    pub discrepancies: Vec<f64>,
    /// Running verdict after each order.
    pub verdicts: Vec<Verdict>,
}

impl DirectReport {
    pub fn verdict(&self) -> Verdict {
        self.verdicts.last().copied().unwrap_or(Verdict::Undetermined)
    }

    /// First order whose verdict is `v`.
    pub fn first(&self, v: Verdict) -> Option<usize> {
        self.verdicts.iter().position(|&w| w == v).map(|k| k + 1)
    }
}

/// True when the last `GROWTH_WINDOW + 1` values rise strictly and the final
/// one is at least `GROWTH_FACTOR` times the first.
fn growth_detected(d: &[f64]) -> bool {
    if d.len() <= GROWTH_WINDOW {
        return false;
    }
    let w = &d[d.len() - GROWTH_WINDOW - 1..];
    w.windows(2).all(|p| p[1] > p[0]) && w[GROWTH_WINDOW] >= GROWTH_FACTOR * w[0]
}

/// Extends the series through `up_to` and compares each partial sum with
/// `reference` sampled on the same grid of `[a, b]`.
pub fn direct_partial_sums(state: &mut DirectSeriesState, reference: &PiiProfile, up_to: usize) -> Result<DirectReport> {
    state.grid.check_len(reference.y.len())?;
    let len = state.z.len();
    let mut sum = vec![0.0; len];
    let mut report = DirectReport { discrepancies: Vec::new(), verdicts: Vec::new() };
    let mut verdict = Verdict::Undetermined;
    for n in 1..=up_to {
        if n > state.len() && !state.push_next()? {
            // every later partial sum contains the overflowed term as well
            for _ in n..=up_to {
                report.discrepancies.push(f64::INFINITY);
                report.verdicts.push(Verdict::Divergent);
            }
            break;
        }
        for (acc, v) in sum.iter_mut().zip(&state.terms[n - 1].y) {
            *acc += v;
        }
        let d = sum.iter().zip(&reference.y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        let d = if d.is_nan() { f64::INFINITY } else { d };
        report.discrepancies.push(d);
        if verdict != Verdict::Divergent {
            if !d.is_finite() || (n <= DETECTOR_CAP && growth_detected(&report.discrepancies)) {
                verdict = Verdict::Divergent;
            } else if d <= CONVERGED_BELOW {
                verdict = Verdict::Convergent;
            }
        }
        report.verdicts.push(verdict);
    }
    Ok(report)
}

/// `(max |2y^3| / |zy|, max |2y^3| / |C|)` over the profile.
pub fn magnitude_ratios(profile: &PiiProfile, c: f64) -> (f64, f64) {
    let mut zy = 0.0f64;
    let mut cc = 0.0f64;
    for (&z, &y) in profile.z.iter().zip(&profile.y) {
        let cubic = 2.0 * y.powi(3).abs();
        zy = zy.max(cubic / (z * y).abs());
        cc = cc.max(cubic / c.abs());
    }
    (zy, cc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(a: f64, b: f64, c: f64) -> PiiInstance {
        PiiInstance { a, b, c, beta: b - a, gamma: a }
    }

    #[test]
    fn zero_constant_gives_zero_terms() {
        let g = Grid::shared(257).unwrap();
        let mut s = DirectSeriesState::new(instance(1.0, 2.0, 0.0), &g).unwrap();
        let reference = PiiProfile { z: s.z().to_vec(), y: vec![0.0; 257], y_prime: vec![0.0; 257] };
        let rep = direct_partial_sums(&mut s, &reference, 5).unwrap();
        assert!(rep.discrepancies.iter().all(|&d| d == 0.0));
        assert_eq!(rep.verdict(), Verdict::Convergent);
    }

    #[test]
    fn first_term_bcs_and_residual() {
        let g = Grid::shared(2049).unwrap();
        let inst = instance(1.645, 3.554, 0.714);
        let mut s = DirectSeriesState::new(inst, &g).unwrap();
        assert!(s.push_next().unwrap());
        let t = &s.terms()[0];
        assert!(t.y_prime[0].abs() <= 1e-9 && t.y_prime[2048].abs() <= 1e-9);
        let h = (inst.b - inst.a) / 2048.0;
        for i in 1..2048 {
            let ypp = (t.y[i + 1] - 2.0 * t.y[i] + t.y[i - 1]) / (h * h);
            assert!((ypp - s.z()[i] * t.y[i] - inst.c).abs() <= 1e-7);
        }
    }

    #[test]
    fn growth_detector() {
        let rising: Vec<f64> = (0..11).map(|k| 1.3f64.powi(k)).collect();
        assert!(growth_detected(&rising));
        let slow: Vec<f64> = (0..11).map(|k| 1.0 + k as f64 * 0.1).collect();
        assert!(!growth_detected(&slow));
        let mut bumpy = rising.clone();
        bumpy[5] = 0.1;
        assert!(!growth_detected(&bumpy));
        assert!(!growth_detected(&rising[..10]));
    }

    #[test]
    fn bad_interval_rejected() {
        let g = Grid::shared(257).unwrap();
        assert!(DirectSeriesState::new(instance(2.0, 1.0, 0.1), &g).is_err());
        assert!(matches!(DirectSeriesState::new(instance(-40.0, -39.0, 0.1), &g), Err(Error::Domain { .. })));
    }

    #[test]
    fn verdict_labels() {
        assert_eq!(Verdict::Divergent.to_string(), "divergent");
        assert_eq!(Verdict::Convergent.as_str(), "convergent");
    }
}
