//! Goodness-of-fit statistics and the parametric bootstrap.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandwidth;
use crate::data::Sample;
use crate::error::{Error, Result};
use crate::estimators::{pseudo_obs, EstimatorConfig, EstimatorKind, EvalGrid, Estimator, PseudoSample};
use crate::families::{sample, theta_from_tau, CopulaSpec, Family};
use crate::harness::seeds;

/// Stream identifier of bootstrap replicates.
const BOOT_STREAM: u64 = 0xb007;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatKind {
    Ks,
    Cm,
    Q,
}

impl StatKind {
    pub const ALL: [StatKind; 3] = [StatKind::Ks, StatKind::Cm, StatKind::Q];

    pub fn name(self) -> &'static str {
        match self {
            StatKind::Ks => "ks",
            StatKind::Cm => "cm",
            StatKind::Q => "q",
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Input(format!("unknown statistic '{s}'")))
    }
}

/// `C(u_j, v_k)` of `spec` on the grid.
pub fn copula_grid(spec: &CopulaSpec, grid: &EvalGrid) -> Vec<Vec<f64>> {
    let p = grid.points();
    p.par_iter()
        .map(|&u| p.iter().map(|&v| spec.cdf(u, v)).collect())
        .collect()
}

/// `max |a − b|` over two grids of equal shape.
pub fn sup_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

/// `(1/m²) Σ (a − b)²` over two `m × m` grids.
pub fn mean_sq_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let m = a.len() as f64;
    let s: f64 = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
        .sum();
    s / (m * m)
}

/// `Σ_i (Ĉ(û_i, v̂_i) − C(û_i, v̂_i))²`.
pub fn cm_distance(est: &Estimator, spec: &CopulaSpec) -> f64 {
    let ps = est.pseudo_sample();
    est.eval_at_pseudo()
        .iter()
        .zip(ps.u().iter().zip(ps.v()))
        .map(|(&c, (&u, &v))| (c - spec.cdf(u, v)).powi(2))
        .sum()
}

pub fn stat_ks(est: &Estimator, null: &CopulaSpec, grid: &EvalGrid) -> f64 {
    sup_distance(&est.eval_grid(grid), &copula_grid(null, grid))
}

pub fn stat_cm(est: &Estimator, null: &CopulaSpec) -> f64 {
    cm_distance(est, null)
}

pub fn stat_q(est: &Estimator, null: &CopulaSpec, grid: &EvalGrid) -> f64 {
    mean_sq_distance(&est.eval_grid(grid), &copula_grid(null, grid))
}

pub fn statistic(kind: StatKind, est: &Estimator, null: &CopulaSpec, grid: &EvalGrid) -> f64 {
    match kind {
        StatKind::Ks => stat_ks(est, null, grid),
        StatKind::Cm => stat_cm(est, null),
        StatKind::Q => stat_q(est, null, grid),
    }
}

/// `(1 + #{b ≥ observed}) / (B + 1)`.
pub fn p_value(observed: f64, boot: &[f64]) -> f64 {
    let exceed = boot.iter().filter(|&&b| b >= observed).count();
    (1 + exceed) as f64 / (boot.len() + 1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub statistic_kind: StatKind,
    pub estimator_kind: EstimatorKind,
    pub null_family: Family,
    pub observed: f64,
    pub bootstrap_values: Vec<f64>,
    pub p_value: f64,
    #[serde(rename = "B")]
    pub b: usize,
    pub theta_hat: f64,
    /// Bandwidth used on the observed sample; 0 for the empirical copula.
    pub h: f64,
    pub seed: u64,
    /// Re-fitted parameter of every replicate.
    pub bootstrap_thetas: Vec<f64>,
}

/// Fits `family` by inverting Kendall's tau of `ps`.
pub fn fit_null(family: Family, ps: &PseudoSample) -> Result<CopulaSpec> {
    theta_from_tau(family, ps.kendall_tau()?)
}

/// As [`fit_null`], but moves an unattainable `τ̂` to the nearest attainable
/// value instead of failing. Used inside the bootstrap, where a replicate
/// from a weakly dependent null can land outside the family's range.
fn fit_null_clamped(family: Family, ps: &PseudoSample) -> Result<CopulaSpec> {
    const EDGE: f64 = 1e-4;
    let tau = ps.kendall_tau()?;
    let tau = match family {
        Family::Clayton | Family::Gumbel => tau.clamp(EDGE, 1.0 - EDGE),
        Family::Frank | Family::Plackett if tau.abs() < EDGE => EDGE,
        _ => tau.clamp(-1.0 + EDGE, 1.0 - EDGE),
    };
    theta_from_tau(family, tau)
}

struct Evaluated {
    value: f64,
    h: f64,
}

fn evaluate(
    ps: &PseudoSample,
    null: &CopulaSpec,
    config: &EstimatorConfig,
    stat: StatKind,
    grid: &EvalGrid,
    lenient: bool,
) -> Result<Evaluated> {
    let h = match bandwidth::resolve(ps, config) {
        Ok(h) => h,
        Err(e) if !lenient => return Err(e),
        Err(_) => (ps.len() as f64).powf(-1.0 / 3.0).min(crate::kernels::H_MAX),
    };
    let est = Estimator::new(ps, config.kind, h)?;
    Ok(Evaluated {
        value: statistic(stat, &est, null, grid),
        h,
    })
}

/// One bootstrap test per `(config, stat)` pair, all sharing the same
/// replicate samples and re-fitted parameters.
pub fn bootstrap_gof_multi(
    data: &Sample,
    family: Family,
    tests: &[(EstimatorConfig, StatKind)],
    b: usize,
    seed: u64,
) -> Result<Vec<GofReport>> {
    if b == 0 {
        return Err(Error::Input("bootstrap count must be at least 1".into()));
    }
    if tests.is_empty() {
        return Ok(Vec::new());
    }
    let n = data.len();
    let grid = EvalGrid::default();
    let variants: Vec<_> = tests.iter().map(|(c, _)| c.variant).collect();

    // observed statistics; θ̂ is fitted on the first variant's pseudo-sample,
    // which is variant-invariant since τ̂ depends only on ranks
    let ps_obs: Vec<PseudoSample> = variants
        .iter()
        .map(|&v| pseudo_obs(data, v))
        .collect::<Result<_>>()?;
    let null = fit_null(family, &ps_obs[0])?;
    let observed: Vec<Evaluated> = tests
        .iter()
        .zip(&ps_obs)
        .map(|((config, stat), ps)| evaluate(ps, &null, config, *stat, &grid, false))
        .collect::<Result<_>>()?;

    let replicates: Vec<(f64, Vec<f64>)> = (0..b as u64)
        .into_par_iter()
        .map(|r| -> Result<(f64, Vec<f64>)> {
            let mut rng = seeds::stream(seed, BOOT_STREAM, r);
            let star = sample(&null, n, &mut rng);
            let first = pseudo_obs(&star, variants[0])?;
            let refit = fit_null_clamped(family, &first)?;
            let mut values = Vec::with_capacity(tests.len());
            for ((config, stat), &variant) in tests.iter().zip(&variants) {
                let ps = if variant == variants[0] {
                    first.clone()
                } else {
                    pseudo_obs(&star, variant)?
                };
                values.push(evaluate(&ps, &refit, config, *stat, &grid, true)?.value);
            }
            Ok((refit.theta(), values))
        })
        .collect::<Result<_>>()?;

    let thetas: Vec<f64> = replicates.iter().map(|(t, _)| *t).collect();
    Ok(tests
        .iter()
        .enumerate()
        .map(|(j, (config, stat))| {
            let boot: Vec<f64> = replicates.iter().map(|(_, v)| v[j]).collect();
            GofReport {
                statistic_kind: *stat,
                estimator_kind: config.kind,
                null_family: family,
                observed: observed[j].value,
                p_value: p_value(observed[j].value, &boot),
                bootstrap_values: boot,
                b,
                theta_hat: null.theta(),
                h: observed[j].h,
                seed,
                bootstrap_thetas: thetas.clone(),
            }
        })
        .collect())
}

/// Parametric bootstrap test of `H₀: C ∈ family`.
pub fn bootstrap_gof(
    data: &Sample,
    family: Family,
    config: &EstimatorConfig,
    stat: StatKind,
    b: usize,
    seed: u64,
) -> Result<GofReport> {
    let mut reports = bootstrap_gof_multi(data, family, &[(*config, stat)], b, seed)?;
    Ok(reports.remove(0))
}
