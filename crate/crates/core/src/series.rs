//! Order-by-order perturbation series `E = sum_n E_n` of the supplementary
//! problem, with `mu` as the expansion parameter.
//!
//! Every order solves `nu E_n'' = (1 - sigma + 2 sigma x) E_n + R_n` with
//! Neumann conditions. Substituting the expansion into the equation (halved)
//! and collecting order `n`, with the endpoint values expanded alongside:
//!
//! ```text
//! R_1 = -2 mu
//! R_n = (nu/2) [E^3]_n + (nu/2) x sum_k D_{n-k} E_k - (nu/2) sum_k Q_{n-k} E_k + (nu tau / 2) D_n
//! Q_m = sum_{i+j=m} E_i(0) E_j(0),   D_m = Q_m - sum_{i+j=m} E_i(1) E_j(1)
//! ```
//!
//! with all indices `>= 1`. The cubic convolution is formed as `E_k` times the
//! cached quadratic convolution `[E^2]_{n-k}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{cumulative_integral, max_abs_combined, Grid, GridFunction};
use crate::params::Parameters;
use crate::reference::ReferenceSolution;
use crate::specfun::{scaled_basis, ScaledAiryBasis};

/// Highest order [`SeriesState::extend`] will build.
pub const MAX_ORDER: usize = 500;
const DEGENERATE_DET: f64 = 1e-13;

/// `A`, `B`, `A'`, `B'` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSamples {
    pub basis: ScaledAiryBasis,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a_prime: Vec<f64>,
    pub b_prime: Vec<f64>,
}

impl BasisSamples {
    pub fn new(basis: ScaledAiryBasis, grid: &Grid) -> Result<Self> {
        let n = grid.len();
        let mut out = Self {
            basis,
            a: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            a_prime: Vec::with_capacity(n),
            b_prime: Vec::with_capacity(n),
        };
        for &x in grid.nodes() {
            let v = basis.eval(x)?;
            out.a.push(v.a);
            out.b.push(v.b);
            out.a_prime.push(v.a_prime);
            out.b_prime.push(v.b_prime);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTerm {
    pub order: usize,
    pub profile: GridFunction,
    pub end0: f64,
    pub end1: f64,
    pub d_a: f64,
    pub d_b: f64,
}

/// Solves `nu E'' - (1 - sigma + 2 sigma x) E = R` with `E'(0) = 0 = E'(1)`
/// by variation of parameters. The derivative is assembled from the same
/// running integrals, since the boundary terms of the Leibniz rule cancel.
pub fn solve_term(
    params: &Parameters,
    samples: &BasisSamples,
    rn: &[f64],
    grid: &Arc<Grid>,
    order: usize,
) -> Result<SeriesTerm> {
    grid.check_len(rn.len())?;
    grid.check_len(samples.a.len())?;
    let BasisSamples { a, b, a_prime, b_prime, basis } = samples;
    let m = rn.len() - 1;
    let rb: Vec<f64> = rn.iter().zip(b).map(|(r, v)| r * v).collect();
    let ra: Vec<f64> = rn.iter().zip(a).map(|(r, v)| r * v).collect();
    let int_rb = cumulative_integral(&rb, grid)?;
    let int_ra = cumulative_integral(&ra, grid)?;

    let nu_w = params.nu * basis.wronskian;
    let det = a_prime[m] * b_prime[0] - a_prime[0] * b_prime[m];
    if det.abs() < DEGENERATE_DET || b_prime[0].abs() < DEGENERATE_DET {
        return Err(Error::DegenerateBasis { det });
    }
    let d_a = b_prime[0] / (det * nu_w) * (a_prime[m] * int_rb[m] - b_prime[m] * int_ra[m]);
    let d_b = -a_prime[0] * d_a / b_prime[0];

    let k = -1.0 / nu_w;
    let mut values = Vec::with_capacity(m + 1);
    let mut derivs = Vec::with_capacity(m + 1);
    for i in 0..=m {
        values.push(k * (a[i] * int_rb[i] - b[i] * int_ra[i]) + d_a * a[i] + d_b * b[i]);
        derivs.push(k * (a_prime[i] * int_rb[i] - b_prime[i] * int_ra[i]) + d_a * a_prime[i] + d_b * b_prime[i]);
    }
    let profile = GridFunction::new(grid.clone(), values, derivs)?;
    Ok(SeriesTerm { order, end0: profile.first(), end1: profile.last(), profile, d_a, d_b })
}

/// Terms built so far plus the convolution caches needed for the next order.
#[derive(Debug, Clone)]
pub struct SeriesState {
    params: Parameters,
    grid: Arc<Grid>,
    samples: BasisSamples,
    terms: Vec<SeriesTerm>,
    partial_end0: Vec<f64>,
    partial_end1: Vec<f64>,
    // indexed by order m; entries 0 and 1 are unused
    squares: Vec<Vec<f64>>,
    pairs0: Vec<f64>,
    pairs1: Vec<f64>,
}

impl SeriesState {
    pub fn new(params: &Parameters, grid: &Arc<Grid>) -> Result<Self> {
        let basis = scaled_basis(params)?;
        let samples = BasisSamples::new(basis, grid)?;
        Ok(Self {
            params: *params,
            grid: grid.clone(),
            samples,
            terms: Vec::new(),
            partial_end0: Vec::new(),
            partial_end1: Vec::new(),
            squares: vec![Vec::new(), Vec::new()],
            pairs0: vec![0.0, 0.0],
            pairs1: vec![0.0, 0.0],
        })
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn basis(&self) -> &ScaledAiryBasis {
        &self.samples.basis
    }

    pub fn samples(&self) -> &BasisSamples {
        &self.samples
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    /// Number of orders built.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `E^(n)(0)` for `n = 1..=len`.
    pub fn partial_end0(&self) -> &[f64] {
        &self.partial_end0
    }

    /// `E^(n)(1)` for `n = 1..=len`.
    pub fn partial_end1(&self) -> &[f64] {
        &self.partial_end1
    }

    /// Endpoint values of the partial sum of order `n`.
    pub fn partial_ends(&self, n: usize) -> Result<(f64, f64)> {
        self.check_order(n)?;
        Ok((self.partial_end0[n - 1], self.partial_end1[n - 1]))
    }

    fn check_order(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.terms.len() {
            return Err(Error::Contract(format!(
                "order {n} requested, series holds orders 1..={}",
                self.terms.len()
            )));
        }
        Ok(())
    }

    /// Forcing `R_n` on the grid; needs orders `1..n-1`.
    pub fn rhs_term(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 || self.terms.len() + 1 < n {
            return Err(Error::Contract(format!(
                "forcing of order {n} needs orders 1..{}, series holds {}",
                n.saturating_sub(1),
                self.terms.len()
            )));
        }
        let len = self.grid.len();
        let Parameters { nu, tau, mu, .. } = self.params;
        if n == 1 {
            return Ok(vec![-2.0 * mu; len]);
        }
        let x = self.grid.nodes();
        let half = 0.5 * nu;
        let mut r = vec![0.5 * nu * tau * (self.pairs0[n] - self.pairs1[n]); len];
        for k in 1..=n.saturating_sub(2) {
            let e = self.terms[k - 1].profile.values();
            let sq = &self.squares[n - k];
            let d = self.pairs0[n - k] - self.pairs1[n - k];
            let q = self.pairs0[n - k];
            for i in 0..len {
                r[i] += e[i] * half * (sq[i] + d * x[i] - q);
            }
        }
        Ok(r)
    }

    fn push(&mut self, term: SeriesTerm) {
        let (s0, s1) = match (self.partial_end0.last(), self.partial_end1.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0.0, 0.0),
        };
        self.partial_end0.push(s0 + term.end0);
        self.partial_end1.push(s1 + term.end1);
        self.terms.push(term);

        // caches for order m = len + 1
        let m = self.terms.len() + 1;
        let len = self.grid.len();
        let mut sq = vec![0.0; len];
        let (mut p0, mut p1) = (0.0, 0.0);
        for i in 1..m {
            let (ti, tj) = (&self.terms[i - 1], &self.terms[m - i - 1]);
            let (ei, ej) = (ti.profile.values(), tj.profile.values());
            for (s, (u, v)) in sq.iter_mut().zip(ei.iter().zip(ej)) {
                *s += u * v;
            }
            p0 += ti.end0 * tj.end0;
            p1 += ti.end1 * tj.end1;
        }
        self.squares.push(sq);
        self.pairs0.push(p0);
        self.pairs1.push(p1);
    }

    /// Builds every order up to and including `up_to`.
    pub fn extend(&mut self, up_to: usize) -> Result<()> {
        if up_to > MAX_ORDER {
            return Err(Error::Contract(format!("series order {up_to} exceeds {MAX_ORDER}")));
        }
        for n in self.terms.len() + 1..=up_to {
            let rn = self.rhs_term(n)?;
            let term = solve_term(&self.params, &self.samples, &rn, &self.grid, n)?;
            self.push(term);
        }
        Ok(())
    }

    /// `E^(n) = E_1 + ... + E_n` with its derivative.
    pub fn partial_sum(&self, n: usize) -> Result<GridFunction> {
        self.check_order(n)?;
        let len = self.grid.len();
        let mut values = vec![0.0; len];
        let mut derivs = vec![0.0; len];
        for t in &self.terms[..n] {
            for (acc, v) in values.iter_mut().zip(t.profile.values()) {
                *acc += v;
            }
            for (acc, v) in derivs.iter_mut().zip(t.profile.derivs()) {
                *acc += v;
            }
        }
        GridFunction::new(self.grid.clone(), values, derivs)
    }

    /// Error measure of the partial sum of order `n` against `reference`.
    pub fn delta_n(&self, reference: &ReferenceSolution, n: usize) -> Result<f64> {
        max_abs_combined(&self.partial_sum(n)?, &reference.profile)
    }

    /// `delta_n` for every built order, accumulated in one pass.
    pub fn delta_sequence(&self, reference: &ReferenceSolution) -> Result<Vec<f64>> {
        let target = &reference.profile;
        self.grid.check_len(target.values().len())?;
        let len = self.grid.len();
        let mut values = vec![0.0; len];
        let mut derivs = vec![0.0; len];
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            for (acc, v) in values.iter_mut().zip(t.profile.values()) {
                *acc += v;
            }
            for (acc, v) in derivs.iter_mut().zip(t.profile.derivs()) {
                *acc += v;
            }
            let d = (0..len)
                .map(|i| (values[i] - target.values()[i]).abs() + (derivs[i] - target.derivs()[i]).abs())
                .fold(0.0, f64::max);
            out.push(d);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::DEFAULT_NODES;

    fn state(p: &Parameters) -> SeriesState {
        SeriesState::new(p, &Grid::shared(DEFAULT_NODES).unwrap()).unwrap()
    }

    #[test]
    fn first_forcing_is_constant() {
        let s = state(&Parameters::CASE_ONE);
        let r = s.rhs_term(1).unwrap();
        assert!(r.iter().all(|&v| v == -4.0));
    }

    #[test]
    fn second_forcing_is_endpoint_constant() {
        let mut s = state(&Parameters::CASE_ONE);
        s.extend(1).unwrap();
        let r = s.rhs_term(2).unwrap();
        let t = &s.terms()[0];
        let p = Parameters::CASE_ONE;
        let expected = 0.5 * p.nu * p.tau * (t.end0 * t.end0 - t.end1 * t.end1);
        for v in r {
            assert!((v - expected).abs() <= 1e-14 * expected.abs());
        }
    }

    #[test]
    fn missing_orders_is_contract_violation() {
        let s = state(&Parameters::CASE_ONE);
        assert!(matches!(s.rhs_term(3), Err(Error::Contract(_))));
        assert!(matches!(s.rhs_term(0), Err(Error::Contract(_))));
        assert!(matches!(s.partial_sum(1), Err(Error::Contract(_))));
    }

    #[test]
    fn zero_forcing_gives_zero_term() {
        let p = Parameters::CASE_TWO;
        let s = state(&p);
        let zero = vec![0.0; s.grid().len()];
        let t = solve_term(&p, s.samples(), &zero, s.grid(), 1).unwrap();
        assert_eq!((t.d_a, t.d_b), (0.0, 0.0));
        assert!(t.profile.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_mu_series_vanishes() {
        let mut s = state(&Parameters::CASE_ONE.with_mu(0.0));
        s.extend(6).unwrap();
        for t in s.terms() {
            assert!(t.profile.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn first_term_is_linear_in_mu() {
        let base = Parameters::CASE_ONE;
        let mut s1 = state(&base);
        s1.extend(1).unwrap();
        for lambda in [2.0, -1.0] {
            let mut s2 = state(&base.with_mu(lambda * base.mu));
            s2.extend(1).unwrap();
            let (u, v) = (s1.terms()[0].profile.values(), s2.terms()[0].profile.values());
            for (a, b) in u.iter().zip(v) {
                assert!((lambda * a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn terms_satisfy_bcs_and_coefficient_relation() {
        for p in [Parameters::CASE_ONE, Parameters::CASE_TWO] {
            let mut s = state(&p);
            s.extend(12).unwrap();
            let b = s.samples();
            for t in s.terms() {
                let d = t.profile.derivs();
                assert!(d[0].abs() <= 1e-9 && d[d.len() - 1].abs() <= 1e-9);
                let rel = -b.a_prime[0] * t.d_a / b.b_prime[0];
                assert!((t.d_b - rel).abs() <= 1e-12 * rel.abs().max(f64::MIN_POSITIVE));
            }
            let mut acc = 0.0;
            for (k, t) in s.terms().iter().enumerate() {
                acc += t.end0;
                assert!((s.partial_end0()[k] - acc).abs() <= 1e-14 * acc.abs().max(1.0));
                assert_eq!(t.order, k + 1);
            }
        }
    }

    #[test]
    fn order_cap() {
        let mut s = state(&Parameters::CASE_TWO);
        assert!(matches!(s.extend(MAX_ORDER + 1), Err(Error::Contract(_))));
    }
}
