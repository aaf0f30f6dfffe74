//! Plug-in bandwidth selection.
//!
//! For the local-linear and mirror-reflection estimators the asymptotic mean
//! squared error at `(u, v)` is
//!
//! ```text
//! AMSE(h) = avar_const / n − h · avar_h_factor / n + h⁴ · abias_factor²
//! ```
//!
//! Averaging over the pseudo-observations of a fitted Frank reference gives
//! `−c1 h / n + c2 h⁴` up to a constant, minimised at `h* = (c1 / (4 c2 n))^⅓`.
//!
//! For the transformation estimator the same expansion is applied to the
//! bivariate normal distribution of the normal scores, integrated against
//! that distribution, and the minimiser is halved.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{BandwidthChoice, EstimatorConfig, EstimatorKind, PseudoSample};
use crate::families::{theta_from_tau, CopulaSpec, Family};
use crate::kernels::{b_k, shrink, sigma2_k, H_MAX, H_MAX_SHRUNK};
use crate::quad;
use crate::special::{norm_cdf, norm_pdf};

/// Smallest sample size accepted by the plug-in rules.
pub const MIN_N: usize = 10;

/// References with `|τ̂|` at or above this are refused by the normal rule.
pub const TAU_SINGULAR: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmseComponents {
    pub abias_factor: f64,
    pub avar_const: f64,
    pub avar_h_factor: f64,
}

/// Leading bias and variance coefficients at an interior `(u, v)`.
pub fn amse_components(spec: &CopulaSpec, u: f64, v: f64, shrink_on: bool) -> Result<AmseComponents> {
    let (c_uu, _, c_vv) = spec.second_partials(u, v)?;
    let c = spec.cdf(u, v);
    let a = spec.partial_u(u, v);
    let b = spec.partial_v(u, v);
    let (bu, bv) = if shrink_on { (shrink(u), shrink(v)) } else { (1.0, 1.0) };
    let abias_factor = 0.5 * sigma2_k() * (bu * bu * c_uu + bv * bv * c_vv);
    let avar_h_factor = b_k() * (bu * a * (1.0 - a) + bv * b * (1.0 - b));
    let avar_const = c * (1.0 - c) + a * a * u * (1.0 - u) + b * b * v * (1.0 - v)
        - 2.0 * a * (c - c * u)
        - 2.0 * b * (c - c * v)
        + 2.0 * a * b * (c - u * v);
    Ok(AmseComponents {
        abias_factor,
        avar_const,
        avar_h_factor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthMethod {
    FrankReference,
    NormalReferenceT,
    FixedH,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthSelection {
    pub h: f64,
    pub method: BandwidthMethod,
    /// Frank `θ̂` for the reference rule, `ρ̂` for the normal rule.
    pub theta_hat: f64,
    pub c1: f64,
    pub c2: f64,
    /// The normal-rule minimiser before halving.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_unhalved: Option<f64>,
}

/// `(c1 / (4 c2 n))^⅓`.
pub fn closed_form_h(c1: f64, c2: f64, n: usize) -> f64 {
    (c1 / (4.0 * c2 * n as f64)).cbrt()
}

fn fallback_h(n: usize) -> f64 {
    (n as f64).powf(-1.0 / 3.0).min(H_MAX)
}

fn check_n(ps: &PseudoSample) -> Result<usize> {
    let n = ps.len();
    if n < MIN_N {
        return Err(Error::InsufficientData { needed: MIN_N, got: n });
    }
    Ok(n)
}

/// Plug-in constants `(c1, c2)` of the Frank reference at `spec`, averaged
/// over the pseudo-observations.
pub fn reference_constants(ps: &PseudoSample, spec: &CopulaSpec, shrink_on: bool) -> Result<(f64, f64)> {
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    for (&u, &v) in ps.u().iter().zip(ps.v()) {
        let a = amse_components(spec, u, v, shrink_on)?;
        c1 += a.avar_h_factor;
        c2 += a.abias_factor * a.abias_factor;
    }
    let n = ps.len() as f64;
    Ok((c1 / n, c2 / n))
}

/// Frank-reference rule for LL, LLS, MR and MRS.
pub fn select_h_reference(ps: &PseudoSample, shrink_on: bool) -> Result<BandwidthSelection> {
    let n = check_n(ps)?;
    let fallback = |theta_hat| {
        warn!("degenerate Frank reference; using h = n^(-1/3)");
        BandwidthSelection {
            h: fallback_h(n),
            method: BandwidthMethod::FrankReference,
            theta_hat,
            c1: f64::NAN,
            c2: 0.0,
            h_unhalved: None,
        }
    };
    let tau = ps.kendall_tau()?;
    let spec = match theta_from_tau(Family::Frank, tau) {
        Ok(s) => s,
        Err(_) => return Ok(fallback(f64::NAN)),
    };
    let (c1, c2) = reference_constants(ps, &spec, shrink_on)?;
    if !(c2 > 1e-300) || !c1.is_finite() {
        return Ok(fallback(spec.theta()));
    }
    let cap = if shrink_on { H_MAX_SHRUNK } else { H_MAX };
    let h = closed_form_h(c1, c2, n).min(cap);
    Ok(BandwidthSelection {
        h,
        method: BandwidthMethod::FrankReference,
        theta_hat: spec.theta(),
        c1,
        c2,
        h_unhalved: None,
    })
}

/// `(c1, c2) = (∬ (H_x + H_y) dH, ∬ (H_xx + H_yy)² dH)` for the standard
/// bivariate normal `H` with correlation `rho`.
pub fn normal_reference_constants(rho: f64) -> (f64, f64) {
    let s = (1.0 - rho * rho).sqrt();
    let rule = quad::rule64();
    let (lim_lo, lim_hi) = (-8.0, 8.0);
    let half = 0.5 * (lim_hi - lim_lo);
    let mid = 0.5 * (lim_hi + lim_lo);
    // first and second derivatives of H along x at (x, y)
    let hx = |x: f64, y: f64| {
        let z = (y - rho * x) / s;
        let p = norm_pdf(x);
        (p * norm_cdf(z), -x * p * norm_cdf(z) - rho / s * p * norm_pdf(z))
    };
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    for (&tx, &wx) in rule.nodes.iter().zip(&rule.weights) {
        let x = mid + half * tx;
        let px = norm_pdf(x);
        for (&tz, &wz) in rule.nodes.iter().zip(&rule.weights) {
            let z = mid + half * tz;
            let y = rho * x + s * z;
            let w = wx * wz * half * half * px * norm_pdf(z);
            let (d1x, d2x) = hx(x, y);
            let (d1y, d2y) = hx(y, x);
            c1 += w * (d1x + d1y);
            let b = d2x + d2y;
            c2 += w * b * b;
        }
    }
    (c1, c2)
}

/// Normal-reference rule for the transformation estimator.
pub fn select_h_transform(ps: &PseudoSample) -> Result<BandwidthSelection> {
    let n = check_n(ps)?;
    let tau = ps.kendall_tau()?;
    if tau.abs() >= TAU_SINGULAR {
        return Err(Error::NearSingular(tau.abs()));
    }
    let rho = (std::f64::consts::FRAC_PI_2 * tau).sin();
    let (c1, c2) = normal_reference_constants(rho);
    let s2 = sigma2_k();
    let full = (b_k() * c1 / (n as f64 * s2 * s2 * c2)).cbrt();
    Ok(BandwidthSelection {
        h: 0.5 * full,
        method: BandwidthMethod::NormalReferenceT,
        theta_hat: rho,
        c1,
        c2,
        h_unhalved: Some(full),
    })
}

/// Plug-in rule matching `kind`. Fails for the empirical copula.
pub fn select_auto(ps: &PseudoSample, kind: EstimatorKind) -> Result<BandwidthSelection> {
    match kind {
        EstimatorKind::E => Err(Error::Input("the empirical copula has no bandwidth".into())),
        EstimatorKind::T => select_h_transform(ps),
        k => select_h_reference(ps, k.is_shrunk()),
    }
}

/// Resolves the bandwidth of `config` on `ps`; `0` for the empirical copula.
pub fn resolve(ps: &PseudoSample, config: &EstimatorConfig) -> Result<f64> {
    if !config.kind.uses_bandwidth() {
        return Ok(0.0);
    }
    match config.bandwidth {
        BandwidthChoice::Fixed(h) => Ok(h),
        BandwidthChoice::Auto => Ok(select_auto(ps, config.kind)?.h),
    }
}
