//! Real Airy functions in double precision, and the rescaled pair
//! `A(x) = Ai(s(x))`, `B(x) = Bi(s(x))` that solves the per-order linear ODE
//! `nu E'' = (1 - sigma + 2 sigma x) E`.
//!
//! Evaluation regimes:
//!
//! * `|t| <= 2`: Maclaurin series.
//! * `2 < |t| <= 9`: one Taylor step of the Airy ODE from a tabulated anchor
//!   (spacing 0.5). Anchors are built once: `Bi` from its Maclaurin series
//!   (all terms positive for `t > 0`), `Ai` on `t > 0` by stepping down from
//!   the asymptotic value at `t = 9` (the stable direction for a recessive
//!   solution), and both on `t < 0` by stepping outward from `t = -2`.
//! * `|t| > 9`: asymptotic expansions, exponential for `t > 0` and
//!   modulus/phase for `t < 0`; with `zeta >= 18` the truncation error is
//!   below `exp(-2 zeta)`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::params::Parameters;

/// Largest `|t|` accepted by [`airy_eval`].
pub const AIRY_ARG_LIMIT: f64 = 30.0;

const MACLAURIN_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 9.0;
const ANCHOR_STEP: f64 = 0.5;
const ANCHOR_COUNT: usize = 37; // -9, -8.5, ..., 9

// Ai(0) = 3^(-2/3) / Gamma(2/3), -Ai'(0) = 3^(-1/3) / Gamma(1/3)
const AI0: f64 = 0.355_028_053_887_817_239_26;
const AIP0: f64 = 0.258_819_403_792_806_798_41;
const SQRT3: f64 = 1.732_050_807_568_877_293_5;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_95;

/// `Ai`, `Bi` and their derivatives at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryQuad {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryQuad {
    /// `Ai Bi' - Ai' Bi`, which equals `1/pi` exactly.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

/// Evaluates `Ai`, `Bi`, `Ai'`, `Bi'` at `t`, for `|t| <= 30`.
pub fn airy_eval(t: f64) -> Result<AiryQuad> {
    if !t.is_finite() || t.abs() > AIRY_ARG_LIMIT {
        return Err(Error::Domain { value: t, lo: -AIRY_ARG_LIMIT, hi: AIRY_ARG_LIMIT });
    }
    Ok(if t.abs() <= MACLAURIN_LIMIT {
        maclaurin(t)
    } else if t.abs() <= ASYMPTOTIC_LIMIT {
        from_anchor(t)
    } else if t > 0.0 {
        asymptotic_positive(t)
    } else {
        asymptotic_negative(-t)
    })
}

/// The two Maclaurin branches `f(t)`, `g(t)` and their derivatives.
fn maclaurin_branches(t: f64) -> (f64, f64, f64, f64) {
    let t3 = t * t * t;
    // f = sum t^{3k} / prod (3j-1)(3j),  g = sum t^{3k+1} / prod (3j)(3j+1)
    let (mut f, mut g) = (1.0, t);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut a, mut b) = (1.0, t);
    let mut c = 0.5 * t * t; // first derivative term of f
    let mut e = 1.0;
    for k in 1..400 {
        let kf = k as f64;
        a *= t3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        b *= t3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        if k > 1 {
            c *= t3 / ((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
        }
        e *= t3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        f += a;
        g += b;
        fp += c;
        gp += e;
        let small = |term: f64, sum: f64| term.abs() <= 1e-17 * sum.abs();
        if small(a, f) && small(b, g) && small(c, fp) && small(e, gp) {
            break;
        }
    }
    (f, g, fp, gp)
}

fn maclaurin(t: f64) -> AiryQuad {
    let (f, g, fp, gp) = maclaurin_branches(t);
    AiryQuad {
        ai: AI0 * f - AIP0 * g,
        bi: SQRT3 * (AI0 * f + AIP0 * g),
        ai_prime: AI0 * fp - AIP0 * gp,
        bi_prime: SQRT3 * (AI0 * fp + AIP0 * gp),
    }
}

/// Advances a solution `(y, y')` of `y'' = t y` from `t0` to `t0 + h` by
/// summing its Taylor series, whose coefficients obey
/// `c_{k+2} = (t0 c_k + c_{k-1}) / ((k+1)(k+2))`.
fn taylor_step(t0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let (mut cm1, mut c0, mut c1) = (0.0, y, dy);
    let mut y_sum = y + dy * h;
    let mut d_sum = dy;
    let mut hk = h; // h^(k+1) at iteration k
    let mut quiet = 0;
    for k in 0..200usize {
        let kf = k as f64;
        let c2 = (t0 * c0 + cm1) / ((kf + 1.0) * (kf + 2.0));
        let pow = hk * h; // h^(k+2)
        let vt = c2 * pow;
        let dt = (kf + 2.0) * c2 * hk;
        y_sum += vt;
        d_sum += dt;
        hk = pow;
        cm1 = c0;
        c0 = c1;
        c1 = c2;
        let scale = y_sum.abs().max((d_sum * h).abs());
        if vt.abs() <= 1e-18 * scale && (dt * h).abs() <= 1e-18 * scale {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (y_sum, d_sum)
}

fn step_quad(t0: f64, q: &AiryQuad, h: f64) -> AiryQuad {
    let (ai, ai_prime) = taylor_step(t0, q.ai, q.ai_prime, h);
    let (bi, bi_prime) = taylor_step(t0, q.bi, q.bi_prime, h);
    AiryQuad { ai, bi, ai_prime, bi_prime }
}

fn anchor_arg(i: usize) -> f64 {
    -ASYMPTOTIC_LIMIT + ANCHOR_STEP * i as f64
}

fn anchors() -> &'static [AiryQuad; ANCHOR_COUNT] {
    static TABLE: OnceLock<[AiryQuad; ANCHOR_COUNT]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let zero = AiryQuad { ai: 0.0, bi: 0.0, ai_prime: 0.0, bi_prime: 0.0 };
        let mut table = [zero; ANCHOR_COUNT];
        let mid = ANCHOR_COUNT / 2;
        let inner = (MACLAURIN_LIMIT / ANCHOR_STEP) as usize;
        for i in mid - inner..=mid + inner {
            table[i] = maclaurin(anchor_arg(i));
        }
        // negative side: march outward, oscillatory so both directions are stable
        for i in (0..mid - inner).rev() {
            table[i] = step_quad(anchor_arg(i + 1), &table[i + 1], -ANCHOR_STEP);
        }
        // positive side: Bi from the series, Ai marched inward from the asymptotic end
        for i in mid + inner + 1..ANCHOR_COUNT {
            let q = maclaurin(anchor_arg(i));
            table[i].bi = q.bi;
            table[i].bi_prime = q.bi_prime;
        }
        let last = ANCHOR_COUNT - 1;
        let end = asymptotic_positive(anchor_arg(last));
        table[last].ai = end.ai;
        table[last].ai_prime = end.ai_prime;
        for i in (mid + inner + 1..last).rev() {
            let (ai, ai_prime) =
                taylor_step(anchor_arg(i + 1), table[i + 1].ai, table[i + 1].ai_prime, -ANCHOR_STEP);
            table[i].ai = ai;
            table[i].ai_prime = ai_prime;
        }
        table
    })
}

fn from_anchor(t: f64) -> AiryQuad {
    let i = ((t + ASYMPTOTIC_LIMIT) / ANCHOR_STEP).round() as usize;
    let i = i.min(ANCHOR_COUNT - 1);
    let t0 = anchor_arg(i);
    step_quad(t0, &anchors()[i], t - t0)
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn asymptotic_coefficients() -> &'static [(f64, f64)] {
    static COEFFS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = vec![(1.0, 1.0)];
        let mut u = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

/// Sums `sum_k sign^k c_k zeta^{-k}` with the chosen coefficient, stopping at
/// the first negligible or growing term.
fn asymptotic_sum(zeta: f64, alternate: bool, pick: impl Fn(&(f64, f64)) -> f64) -> f64 {
    let coeffs = asymptotic_coefficients();
    let mut sum = 0.0;
    let mut zk = 1.0;
    let mut prev = f64::INFINITY;
    for (k, c) in coeffs.iter().enumerate() {
        let sign = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * pick(c) * zk;
        if term.abs() > prev {
            break;
        }
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        prev = term.abs();
        zk /= zeta;
    }
    sum
}

fn asymptotic_positive(t: f64) -> AiryQuad {
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let q = t.powf(0.25);
    let decay = (-zeta).exp();
    let growth = zeta.exp();
    let su_alt = asymptotic_sum(zeta, true, |c| c.0);
    let sv_alt = asymptotic_sum(zeta, true, |c| c.1);
    let su = asymptotic_sum(zeta, false, |c| c.0);
    let sv = asymptotic_sum(zeta, false, |c| c.1);
    AiryQuad {
        ai: 0.5 * FRAC_1_SQRT_PI * decay / q * su_alt,
        ai_prime: -0.5 * FRAC_1_SQRT_PI * q * decay * sv_alt,
        bi: FRAC_1_SQRT_PI * growth / q * su,
        bi_prime: FRAC_1_SQRT_PI * q * growth * sv,
    }
}

/// Modulus/phase form for `Ai(-x)`, `Bi(-x)` with `x > 0`.
fn asymptotic_negative(x: f64) -> AiryQuad {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.powf(0.25);
    let coeffs = asymptotic_coefficients();
    // even/odd split with alternating signs: sum (-1)^k c_{2k} zeta^{-2k}, sum (-1)^k c_{2k+1} zeta^{-2k-1}
    let split = |pick: fn(&(f64, f64)) -> f64| {
        let (mut even, mut odd) = (0.0, 0.0);
        let mut zk = 1.0;
        let mut prev = f64::INFINITY;
        for (k, c) in coeffs.iter().enumerate() {
            let sign = if (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
            let term = sign * pick(c) * zk;
            if term.abs() > prev {
                break;
            }
            if k % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
            if term.abs() <= 1e-17 * (even.abs() + odd.abs()) {
                break;
            }
            prev = term.abs();
            zk /= zeta;
        }
        (even, odd)
    };
    let (ue, uo) = split(|c| c.0);
    let (ve, vo) = split(|c| c.1);
    let (sn, cs) = (zeta - FRAC_PI_4).sin_cos();
    AiryQuad {
        ai: FRAC_1_SQRT_PI / q * (cs * ue + sn * uo),
        bi: FRAC_1_SQRT_PI / q * (-sn * ue + cs * uo),
        ai_prime: FRAC_1_SQRT_PI * q * (sn * ve - cs * vo),
        bi_prime: FRAC_1_SQRT_PI * q * (cs * ve + sn * vo),
    }
}

/// The affine change of variable `s = offset + slope * x` that turns the
/// homogeneous per-order equation into Airy's equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAiryBasis {
    /// `(4 nu sigma^2)^(-1/3)`
    pub scale: f64,
    /// `(1 - sigma) * scale`, the value of `s` at `x = 0`.
    pub offset: f64,
    /// Wronskian `A B' - A' B` with respect to `x`: `(2 sigma / (pi^3 nu))^(1/3)`.
    pub wronskian: f64,
    /// `ds/dx = 2 sigma * scale`.
    pub slope: f64,
}

/// `A`, `B` and their `x`-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValues {
    pub a: f64,
    pub b: f64,
    pub a_prime: f64,
    pub b_prime: f64,
}

pub fn scaled_basis(params: &Parameters) -> Result<ScaledAiryBasis> {
    params.validate()?;
    let Parameters { sigma, nu, .. } = *params;
    let scale = (4.0 * nu * sigma * sigma).cbrt().recip();
    Ok(ScaledAiryBasis {
        scale,
        offset: (1.0 - sigma) * scale,
        wronskian: (2.0 * sigma / (PI * PI * PI * nu)).cbrt(),
        slope: 2.0 * sigma * scale,
    })
}

impl ScaledAiryBasis {
    pub fn arg(&self, x: f64) -> f64 {
        self.offset + self.slope * x
    }

    pub fn eval(&self, x: f64) -> Result<BasisValues> {
        let q = airy_eval(self.arg(x))?;
        Ok(BasisValues {
            a: q.ai,
            b: q.bi,
            a_prime: self.slope * q.ai_prime,
            b_prime: self.slope * q.bi_prime,
        })
    }
}
