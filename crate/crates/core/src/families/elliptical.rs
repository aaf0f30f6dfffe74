//! Normal and Student (4 df) copulas through their conditional laws.
//!
//! For the normal copula `V | U = u` is normal on the probit scale:
//! `C_u(u, v) = Φ((Φ⁻¹(v) − ρΦ⁻¹(u)) / √(1 − ρ²))`.
//! For the t₄ copula it is a scaled t₅:
//! `C_u(u, v) = T₅((y − ρx) √(5 / ((1 − ρ²)(4 + x²))))` with
//! `x = t₄⁻¹(u)`, `y = t₄⁻¹(v)`.
//! The distribution functions integrate these conditionals against the
//! first margin.

use crate::quad;
use crate::special::{norm_cdf, norm_pdf, norm_ppf, t4_pdf, t4_ppf, t5_cdf, t5_pdf};

const CDF_TOL: f64 = 1e-15;

pub(crate) fn normal_partial_u(rho: f64, u: f64, v: f64) -> f64 {
    let s = (1.0 - rho * rho).sqrt();
    norm_cdf((norm_ppf(v) - rho * norm_ppf(u)) / s)
}

/// `∫_{-∞}^{Φ⁻¹(u)} Φ((y − ρz)/s) φ(z) dz`.
pub(crate) fn normal_cdf(rho: f64, u: f64, v: f64) -> f64 {
    let s = (1.0 - rho * rho).sqrt();
    let zu = norm_ppf(u);
    let y = norm_ppf(v);
    let lo = (-12.0f64).min(zu - 12.0);
    quad::adaptive(
        |z: f64| norm_cdf((y - rho * z) / s) * norm_pdf(z),
        lo,
        zu,
        CDF_TOL,
    )
}

pub(crate) fn normal_second(rho: f64, u: f64, v: f64) -> (f64, f64) {
    let s = (1.0 - rho * rho).sqrt();
    let x = norm_ppf(u);
    let y = norm_ppf(v);
    let dens = norm_pdf((y - rho * x) / s);
    let c_uu = -rho / s * dens / norm_pdf(x);
    let c_uv = dens / (s * norm_pdf(y));
    (c_uu, c_uv)
}

fn student_scale(rho: f64, x: f64) -> f64 {
    (5.0 / ((1.0 - rho * rho) * (4.0 + x * x))).sqrt()
}

pub(crate) fn student_partial_u(rho: f64, u: f64, v: f64) -> f64 {
    let x = t4_ppf(u);
    let y = t4_ppf(v);
    t5_cdf((y - rho * x) * student_scale(rho, x))
}

/// Integrates `C_u` against the t₄ margin after the substitution
/// `x = 2 tan β`, under which `dT₄(x) = (3/4) cos³β dβ` and the
/// conditional argument becomes `k (y cos β − 2ρ sin β)`; the integrand
/// is analytic on `(−π/2, β_u]`.
pub(crate) fn student_cdf(rho: f64, u: f64, v: f64) -> f64 {
    let x = t4_ppf(u);
    let y = t4_ppf(v);
    let beta_u = (0.5 * x).atan();
    let k = 5f64.sqrt() / (2.0 * (1.0 - rho * rho).sqrt());
    quad::adaptive(
        |b: f64| {
            let (sb, cb) = b.sin_cos();
            t5_cdf(k * (y * cb - 2.0 * rho * sb)) * 0.75 * cb * cb * cb
        },
        -std::f64::consts::FRAC_PI_2,
        beta_u,
        CDF_TOL,
    )
}

pub(crate) fn student_second(rho: f64, u: f64, v: f64) -> (f64, f64) {
    let x = t4_ppf(u);
    let y = t4_ppf(v);
    let g = student_scale(rho, x);
    let z = (y - rho * x) * g;
    let dens = t5_pdf(z);
    let dz_dx = -g * (rho + (y - rho * x) * x / (4.0 + x * x));
    let c_uu = dens * dz_dx / t4_pdf(x);
    let c_uv = dens * g / t4_pdf(y);
    (c_uu, c_uv)
}
