//! Conversion of supplementary-problem data into Painlevé II data
//! `y'' = 2y^3 + zy + C` on `[a, b]`, and the extraordinary sequence built
//! from the partial sums of the perturbation series.

use crate::error::{Error, Result};
use crate::mesh::{GridFunction, MIN_NODES};
use crate::params::Parameters;
use crate::series::SeriesState;

/// Painlevé II boundary value data with the affine map `z = gamma + beta x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiiInstance {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PiiInstance {
    /// Maps `x` in `[0, 1]` onto `[a, b]`.
    pub fn z_of(&self, x: f64) -> f64 {
        self.gamma + self.beta * x
    }

    pub fn x_of(&self, z: f64) -> f64 {
        (z - self.gamma) / self.beta
    }
}

/// `beta^3 = 2 sigma / nu + (e0^2 - e1^2) / 2`.
pub fn cube_root_argument(e0: f64, e1: f64, params: &Parameters) -> f64 {
    2.0 * params.sigma / params.nu + 0.5 * (e0 * e0 - e1 * e1)
}

/// Painlevé II data for a supplementary solution with endpoint values `e0`, `e1`.
pub fn convert(e0: f64, e1: f64, params: &Parameters) -> Result<PiiInstance> {
    params.validate()?;
    let arg = cube_root_argument(e0, e1, params);
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::InvalidConversion { arg });
    }
    let Parameters { sigma, tau, nu, mu } = *params;
    let beta = arg.cbrt();
    let gamma = (1.0 - sigma - 0.5 * nu * e0 * e0) / (nu * beta * beta);
    let c = (nu * tau * (e0 * e0 - e1 * e1) - 4.0 * mu) / (4.0 * nu * beta * beta * beta);
    Ok(PiiInstance { a: gamma, b: gamma + beta, c, beta, gamma })
}

/// `y` and `y'` sampled at `z_k = gamma + beta x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiiProfile {
    pub z: Vec<f64>,
    pub y: Vec<f64>,
    pub y_prime: Vec<f64>,
}

impl PiiProfile {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// `y(z) = E(x) / (2 beta)`, `y'(z) = E'(x) / (2 beta^2)`.
pub fn convert_profile(sol: &GridFunction, inst: &PiiInstance) -> PiiProfile {
    let beta = inst.beta;
    PiiProfile {
        z: sol.grid().nodes().iter().map(|&x| inst.z_of(x)).collect(),
        y: sol.values().iter().map(|e| e / (2.0 * beta)).collect(),
        y_prime: sol.derivs().iter().map(|e| e / (2.0 * beta * beta)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtraordinaryApproximant {
    pub order: usize,
    /// `None` when `beta_n^3 <= 0`.
    pub instance: Option<PiiInstance>,
    pub profile: Option<PiiProfile>,
    pub cube_root_argument: f64,
}

impl ExtraordinaryApproximant {
    pub fn valid(&self) -> bool {
        self.instance.is_some()
    }
}

/// Constants only, without the profile; cheap enough for every order.
pub fn approximant_instance(state: &SeriesState, n: usize) -> Result<Option<PiiInstance>> {
    let (e0, e1) = state.partial_ends(n)?;
    match convert(e0, e1, state.params()) {
        Ok(inst) => Ok(Some(inst)),
        Err(Error::InvalidConversion { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn approximant(state: &SeriesState, n: usize) -> Result<ExtraordinaryApproximant> {
    let (e0, e1) = state.partial_ends(n)?;
    let instance = approximant_instance(state, n)?;
    let profile = match &instance {
        Some(inst) => Some(convert_profile(&state.partial_sum(n)?, inst)),
        None => None,
    };
    Ok(ExtraordinaryApproximant {
        order: n,
        instance,
        profile,
        cube_root_argument: cube_root_argument(e0, e1, state.params()),
    })
}

/// One approximant per order `1..=up_to`.
pub fn extraordinary_sequence(state: &SeriesState, up_to: usize) -> Result<Vec<ExtraordinaryApproximant>> {
    (1..=up_to).map(|n| approximant(state, n)).collect()
}

/// Max over interior nodes of `|y'' - 2y^3 - zy - C|`, with `y''` from
/// central differences on the uniform `z` grid.
pub fn pii_residual(profile: &PiiProfile, inst: &PiiInstance) -> Result<f64> {
    let n = profile.len();
    if n < MIN_NODES || profile.y.len() != n {
        return Err(Error::Contract(format!(
            "residual needs >= {MIN_NODES} matching samples, got {n} nodes and {} values",
            profile.y.len()
        )));
    }
    let h = (profile.z[n - 1] - profile.z[0]) / (n - 1) as f64;
    let y = &profile.y;
    Ok((1..n - 1)
        .map(|i| {
            let ypp = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
            (ypp - 2.0 * y[i].powi(3) - profile.z[i] * y[i] - inst.c).abs()
        })
        .fold(0.0, f64::max))
}

/// Sup distance between two profiles compared node by node in the normalized
/// coordinate `x = (z - gamma) / beta`; both must come from the same `x` grid.
pub fn normalized_sup_distance(p: &PiiProfile, q: &PiiProfile) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Contract(format!("profile lengths differ: {} vs {}", p.len(), q.len())));
    }
    Ok(p.y.iter().zip(&q.y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max))
}
