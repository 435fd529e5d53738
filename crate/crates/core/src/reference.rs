//! Numerical reference solution of the supplementary boundary value problem
//!
//! ```text
//! 2 nu E'' = nu E^3 + (4 sigma + nu D) x E + (2 - 2 sigma - nu E(0)^2) E + nu tau D - 4 mu,
//! D = E(0)^2 - E(1)^2,   E'(0) = 0 = E'(1),
//! ```
//!
//! where the endpoint values `E(0)`, `E(1)` are part of the unknown.
//!
//! The equation is discretized with Numerov's fourth-order scheme on the shared
//! grid. At the two Neumann ends the ghost-free closure
//! `2 (E_1 - E_0) / h^2 = (97 f_0 + 114 f_1 - 39 f_2 + 8 f_3) / 180` (mirrored
//! at `x = 1`) matches the Taylor expansion through `h^3`. The endpoint
//! unknowns enter every row through `D` and `E(0)^2`, so the Newton matrix is
//! a band (width 3 either side) plus two dense columns; these are folded in
//! with a rank-two bordering step after one band factorization.

use std::sync::Arc;

use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::mesh::{derivative_fourth_order, Grid, GridFunction};
use crate::params::Parameters;

pub const DEFAULT_TOL: f64 = 1e-12;
/// Largest continuation step in `mu`.
pub const MAX_MU_STEP: f64 = 0.25;
const MIN_MU_STEP: f64 = 1.0 / 1024.0;
const MAX_HALVINGS: u32 = 20;
const MAX_NEWTON_ITERS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionType {
    /// Positive and decreasing.
    TypeA,
    /// Negative and increasing.
    TypeB,
    /// Identically zero (`mu = 0`).
    Null,
}

impl SolutionType {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolutionType::TypeA => "A",
            SolutionType::TypeB => "B",
            SolutionType::Null => "null",
        }
    }
}

impl std::fmt::Display for SolutionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub params: Parameters,
    pub profile: GridFunction,
    pub e0: f64,
    pub e1: f64,
    pub solution_type: SolutionType,
    /// Max-norm of the discrete equation (in the form `E'' - rhs`) over interior nodes.
    pub residual_norm: f64,
}

/// Right-hand side of `E'' = f(x, E)` with the endpoint values frozen at `p0`, `p1`.
#[derive(Debug, Clone, Copy)]
struct Rhs {
    sigma: f64,
    tau: f64,
    nu: f64,
    mu: f64,
}

impl Rhs {
    fn new(p: &Parameters) -> Self {
        Self { sigma: p.sigma, tau: p.tau, nu: p.nu, mu: p.mu }
    }

    #[inline]
    fn value(&self, x: f64, e: f64, p0: f64, p1: f64) -> f64 {
        let Self { sigma, tau, nu, mu } = *self;
        let d = p0 * p0 - p1 * p1;
        (nu * e * e * e + (4.0 * sigma + nu * d) * x * e + (2.0 - 2.0 * sigma - nu * p0 * p0) * e
            + nu * tau * d
            - 4.0 * mu)
            / (2.0 * nu)
    }

    #[inline]
    fn d_e(&self, x: f64, e: f64, p0: f64, p1: f64) -> f64 {
        let Self { sigma, nu, .. } = *self;
        let d = p0 * p0 - p1 * p1;
        (3.0 * nu * e * e + (4.0 * sigma + nu * d) * x + 2.0 - 2.0 * sigma - nu * p0 * p0) / (2.0 * nu)
    }

    #[inline]
    fn d_p0(&self, x: f64, e: f64, p0: f64) -> f64 {
        p0 * (x * e - e + self.tau)
    }

    #[inline]
    fn d_p1(&self, x: f64, e: f64, p1: f64) -> f64 {
        -p1 * (x * e + self.tau)
    }
}

const END_WEIGHTS: [f64; 4] = [97.0 / 180.0, 114.0 / 180.0, -39.0 / 180.0, 8.0 / 180.0];
const MID_WEIGHTS: [f64; 3] = [1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0];

/// Discrete residual `F_i` of the Numerov system for nodal values `e`.
///
/// Rows 0 and `n-1` are the Neumann closures; rows in between are interior.
pub fn discrete_residual(params: &Parameters, grid: &Grid, e: &[f64]) -> Result<Vec<f64>> {
    grid.check_len(e.len())?;
    let rhs = Rhs::new(params);
    let x = grid.nodes();
    let h2 = grid.spacing() * grid.spacing();
    let n = e.len();
    let (p0, p1) = (e[0], e[n - 1]);
    let f: Vec<f64> = x.iter().zip(e).map(|(&xi, &ei)| rhs.value(xi, ei, p0, p1)).collect();
    let mut out = vec![0.0; n];
    out[0] = 2.0 * (e[1] - e[0]) / h2 - END_WEIGHTS.iter().zip(&f[..4]).map(|(w, v)| w * v).sum::<f64>();
    for i in 1..n - 1 {
        let second = ((e[i + 1] - e[i]) - (e[i] - e[i - 1])) / h2;
        out[i] = second - (MID_WEIGHTS[0] * f[i - 1] + MID_WEIGHTS[1] * f[i] + MID_WEIGHTS[2] * f[i + 1]);
    }
    let m = n - 1;
    out[m] = 2.0 * (e[m - 1] - e[m]) / h2
        - END_WEIGHTS.iter().zip([f[m], f[m - 1], f[m - 2], f[m - 3]]).map(|(w, v)| w * v).sum::<f64>();
    Ok(out)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton direction for the bordered system `(Band + u0 e_0^T + u1 e_m^T) delta = -F`.
fn newton_direction(params: &Parameters, grid: &Grid, e: &[f64], residual: &[f64]) -> Option<Vec<f64>> {
    let rhs = Rhs::new(params);
    let x = grid.nodes();
    let n = e.len();
    let m = n - 1;
    let h2 = grid.spacing() * grid.spacing();
    let (p0, p1) = (e[0], e[m]);
    let de: Vec<f64> = (0..n).map(|i| rhs.d_e(x[i], e[i], p0, p1)).collect();
    let dp0: Vec<f64> = (0..n).map(|i| rhs.d_p0(x[i], e[i], p0)).collect();
    let dp1: Vec<f64> = (0..n).map(|i| rhs.d_p1(x[i], e[i], p1)).collect();

    let mut band = BandMatrix::zeros(n, 3, 3);
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut put = |row: usize, cols_e: &[(usize, f64)], cols_f: &[(usize, f64)]| {
        for &(j, c) in cols_e {
            band.add(row, j, c);
        }
        for &(j, w) in cols_f {
            band.add(row, j, -w * de[j]);
            u0[row] -= w * dp0[j];
            u1[row] -= w * dp1[j];
        }
    };
    let ends = |idx: [usize; 4]| -> [(usize, f64); 4] {
        [0, 1, 2, 3].map(|k| (idx[k], END_WEIGHTS[k]))
    };
    put(0, &[(0, -2.0 / h2), (1, 2.0 / h2)], &ends([0, 1, 2, 3]));
    for i in 1..m {
        put(
            i,
            &[(i - 1, 1.0 / h2), (i, -2.0 / h2), (i + 1, 1.0 / h2)],
            &[(i - 1, MID_WEIGHTS[0]), (i, MID_WEIGHTS[1]), (i + 1, MID_WEIGHTS[2])],
        );
    }
    put(m, &[(m - 1, 2.0 / h2), (m, -2.0 / h2)], &ends([m, m - 1, m - 2, m - 3]));

    let lu = band.factor().ok()?;
    let mut z: Vec<f64> = residual.iter().map(|r| -r).collect();
    lu.solve_in_place(&mut z);
    lu.solve_in_place(&mut u0);
    lu.solve_in_place(&mut u1);
    // delta = z - u0 * delta_0 - u1 * delta_m, closed on the two border entries
    let (a11, a12, a21, a22) = (1.0 + u0[0], u1[0], u0[m], 1.0 + u1[m]);
    let det = a11 * a22 - a12 * a21;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let d0 = (z[0] * a22 - a12 * z[m]) / det;
    let dm = (a11 * z[m] - a21 * z[0]) / det;
    Some((0..n).map(|i| z[i] - u0[i] * d0 - u1[i] * dm).collect())
}

/// Damped Newton at fixed parameters. On failure returns the last residual norm.
fn newton(params: &Parameters, grid: &Grid, mut e: Vec<f64>, tol: f64) -> std::result::Result<Vec<f64>, f64> {
    let h2 = grid.spacing() * grid.spacing();
    let mut residual = discrete_residual(params, grid, &e).map_err(|_| f64::NAN)?;
    let mut rnorm = max_abs(&residual);
    for _ in 0..MAX_NEWTON_ITERS {
        let delta = newton_direction(params, grid, &e, &residual).ok_or(rnorm)?;
        let scale = max_abs(&e).max(1.0);
        let step = max_abs(&delta);
        if !step.is_finite() {
            return Err(rnorm);
        }
        if step <= tol * scale {
            for (ei, di) in e.iter_mut().zip(&delta) {
                *ei += di;
            }
            return Ok(e);
        }
        // rounding floor of the divided second difference
        let floor = 64.0 * f64::EPSILON * scale / h2;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = e.iter().zip(&delta).map(|(ei, di)| ei + lambda * di).collect();
            if let Ok(r) = discrete_residual(params, grid, &trial) {
                let tn = max_abs(&r);
                if tn.is_finite() && (tn <= (1.0 - 1e-4 * lambda) * rnorm || tn <= floor) {
                    accepted = Some((trial, r, tn));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let (trial, r, tn) = accepted.ok_or(rnorm)?;
        e = trial;
        residual = r;
        rnorm = tn;
    }
    Err(rnorm)
}

/// Solves the supplementary problem on `grid` by continuation in `mu` from the
/// exact zero solution at `mu = 0`.
pub fn solve_reference(params: &Parameters, grid: &Arc<Grid>, tol: f64) -> Result<ReferenceSolution> {
    params.validate()?;
    if !(tol >= 1e-12 && tol.is_finite()) {
        return Err(Error::Validation(format!("tolerance must be >= 1e-12, got {tol}")));
    }
    let n = grid.len();
    if params.mu == 0.0 {
        return Ok(ReferenceSolution {
            params: *params,
            profile: GridFunction::zeros(grid.clone()),
            e0: 0.0,
            e1: 0.0,
            solution_type: SolutionType::Null,
            residual_norm: 0.0,
        });
    }

    let target = params.mu;
    let nominal = target / (target.abs() / MAX_MU_STEP).ceil();
    let mut step = nominal;
    let mut mu = 0.0;
    let mut e = vec![0.0; n];
    while mu != target {
        let next = if (target - mu).abs() <= step.abs() * (1.0 + 1e-12) { target } else { mu + step };
        match newton(&params.with_mu(next), grid, e.clone(), tol) {
            Ok(sol) => {
                e = sol;
                mu = next;
                step = nominal;
            }
            Err(last) => {
                step *= 0.5;
                if step.abs() < MIN_MU_STEP {
                    return Err(Error::Convergence { mu: next, residual: last });
                }
            }
        }
    }

    let residual = discrete_residual(params, grid, &e)?;
    let residual_norm = max_abs(&residual[1..n - 1]);
    let derivs = derivative_fourth_order(&e, grid.spacing());
    let profile = GridFunction::new(grid.clone(), e, derivs)?;
    let expected = if params.mu > 0.0 { SolutionType::TypeA } else { SolutionType::TypeB };
    let found = classify_profile(&profile)?;
    if found != expected {
        return Err(Error::Classification(format!(
            "mu = {} produced a type {found} profile",
            params.mu
        )));
    }
    Ok(ReferenceSolution {
        params: *params,
        e0: profile.first(),
        e1: profile.last(),
        profile,
        solution_type: found,
        residual_norm,
    })
}

/// Sign/monotonicity classification of a converged solution.
pub fn classify_type(sol: &ReferenceSolution) -> Result<SolutionType> {
    classify_profile(&sol.profile)
}

pub fn classify_profile(profile: &GridFunction) -> Result<SolutionType> {
    let values = profile.values();
    let derivs = profile.derivs();
    let scale = max_abs(values);
    if scale == 0.0 {
        return Ok(SolutionType::Null);
    }
    // derivative noise allowance at the Neumann ends
    let slack = 1e-8 * scale.max(1.0);
    if values.iter().all(|&v| v > 0.0) && derivs.iter().all(|&d| d <= slack) {
        Ok(SolutionType::TypeA)
    } else if values.iter().all(|&v| v < 0.0) && derivs.iter().all(|&d| d >= -slack) {
        Ok(SolutionType::TypeB)
    } else {
        let pos = values.iter().filter(|&&v| v > 0.0).count();
        Err(Error::Classification(format!(
            "{pos} of {} samples positive; derivative range [{:e}, {:e}]",
            values.len(),
            derivs.iter().cloned().fold(f64::INFINITY, f64::min),
            derivs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::DEFAULT_NODES;

    fn grid() -> Arc<Grid> {
        Grid::shared(DEFAULT_NODES).unwrap()
    }

    #[test]
    fn zero_mu_gives_null_solution() {
        let p = Parameters::new(0.4, 0.3, 2.0, 0.0).unwrap();
        let sol = solve_reference(&p, &grid(), DEFAULT_TOL).unwrap();
        assert_eq!(sol.solution_type, SolutionType::Null);
        assert!(sol.profile.values().iter().all(|&v| v == 0.0));
        assert_eq!((sol.e0, sol.e1), (0.0, 0.0));
        assert_eq!(classify_type(&sol).unwrap(), SolutionType::Null);
    }

    #[test]
    fn case_one_endpoints() {
        let sol = solve_reference(&Parameters::CASE_ONE, &grid(), DEFAULT_TOL).unwrap();
        assert_eq!(sol.solution_type, SolutionType::TypeA);
        assert!((sol.e0 - 4.180).abs() < 1e-3, "e0 = {}", sol.e0);
        assert!((sol.e1 - 4.129).abs() < 1e-3, "e1 = {}", sol.e1);
        assert!(sol.residual_norm <= 1e-8, "residual {}", sol.residual_norm);
        let d = sol.profile.derivs();
        assert!(d[0].abs() <= 1e-9 && d[d.len() - 1].abs() <= 1e-9, "{} {}", d[0], d[d.len() - 1]);
    }

    #[test]
    fn case_two_is_type_b() {
        let sol = solve_reference(&Parameters::CASE_TWO, &grid(), DEFAULT_TOL).unwrap();
        assert_eq!(sol.solution_type, SolutionType::TypeB);
        assert!(sol.profile.values().iter().all(|&v| v < 0.0));
        assert!(sol.profile.values().windows(2).all(|w| w[1] >= w[0]));
        assert!(sol.e0 * sol.e0 > sol.e1 * sol.e1);
    }

    #[test]
    fn rejects_bad_input() {
        let g = grid();
        let bad = Parameters { sigma: 0.5, tau: 1.2, nu: 1.0, mu: 1.0 };
        assert!(matches!(solve_reference(&bad, &g, DEFAULT_TOL), Err(Error::Validation(_))));
        assert!(matches!(
            solve_reference(&Parameters::CASE_ONE, &g, 1e-14),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn mixed_sign_profile_is_rejected() {
        let g = Grid::shared(257).unwrap();
        let vals = g.sample(|x| x - 0.5);
        let ders = vec![1.0; g.len()];
        let prof = GridFunction::new(g, vals, ders).unwrap();
        assert!(matches!(classify_profile(&prof), Err(Error::Classification(_))));
    }

    #[test]
    fn newton_matrix_matches_finite_differences() {
        // directional derivative of the residual against the bordered solve
        let g = Grid::uniform(257).unwrap();
        let p = Parameters::CASE_ONE;
        let e: Vec<f64> = g.sample(|x| 3.0 + 0.4 * (1.0 - x) * (1.0 - x));
        let r = discrete_residual(&p, &g, &e).unwrap();
        let delta = newton_direction(&p, &g, &e, &r).unwrap();
        let eps = 1e-3;
        let plus: Vec<f64> = e.iter().zip(&delta).map(|(a, d)| a + eps * d).collect();
        let minus: Vec<f64> = e.iter().zip(&delta).map(|(a, d)| a - eps * d).collect();
        let rp = discrete_residual(&p, &g, &plus).unwrap();
        let rm = discrete_residual(&p, &g, &minus).unwrap();
        // J delta should equal -F
        for i in 0..g.len() {
            let jd = (rp[i] - rm[i]) / (2.0 * eps);
            assert!((jd + r[i]).abs() <= 1e-5 * (1.0 + r[i].abs()), "row {i}: {jd} vs {}", -r[i]);
        }
    }
}
