//! Kendall's tau of each family and its inversion.

use rayon::prelude::*;

use super::{plackett, CopulaSpec, Family};
use crate::data::Sample;
use crate::error::{Error, Result};
use crate::quad;

/// Grid size of the midpoint rule behind the Plackett tau.
const PLACKETT_GRID: usize = 256;

/// Population Kendall's tau of `spec`.
pub fn tau_from_theta(spec: &CopulaSpec) -> f64 {
    let t = spec.theta();
    if spec.is_product() {
        return 0.0;
    }
    match spec.family() {
        Family::Independence => 0.0,
        Family::Clayton => t / (t + 2.0),
        Family::Gumbel => 1.0 - 1.0 / t,
        Family::Frank => frank_tau(t),
        Family::Plackett => plackett_tau(t),
        Family::Normal | Family::Student4 => std::f64::consts::FRAC_2_PI * t.asin(),
    }
}

/// `τ = 1 + 4(D₁(θ) − 1)/θ` with the Debye function
/// `D₁(θ) = θ⁻¹ ∫₀^θ t/(eᵗ − 1) dt`, integrated by 64-point Gauss–Legendre.
fn frank_tau(theta: f64) -> f64 {
    let integrand = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            t / t.exp_m1() - 1.0
        }
    };
    let d1_minus_one = quad::rule64().integrate(integrand, 0.0, theta) / theta;
    1.0 + 4.0 * d1_minus_one / theta
}

/// `τ = 4 ∬ C dC − 1` by the midpoint rule against the Plackett density.
fn plackett_tau(theta: f64) -> f64 {
    let m = PLACKETT_GRID;
    let h = 1.0 / m as f64;
    let mut acc = 0.0;
    for i in 0..m {
        let u = (i as f64 + 0.5) * h;
        let mut row = 0.0;
        for j in 0..m {
            let v = (j as f64 + 0.5) * h;
            row += plackett::cdf(theta, u, v) * plackett::second(theta, u, v).1;
        }
        acc += row;
    }
    4.0 * acc * h * h - 1.0
}

/// Parameter of `family` whose Kendall's tau equals `tau`.
///
/// Closed forms for Clayton, Gumbel and the elliptical families; bisection on
/// [`tau_from_theta`] for Frank and Plackett.
pub fn theta_from_tau(family: Family, tau: f64) -> Result<CopulaSpec> {
    let out_of_range = || Err(Error::InversionRange {
        family: family.name(),
        tau,
    });
    if !tau.is_finite() {
        return out_of_range();
    }
    match family {
        Family::Independence => {
            if tau == 0.0 {
                Ok(CopulaSpec::independence())
            } else {
                out_of_range()
            }
        }
        Family::Clayton => {
            if tau <= 0.0 || tau >= 1.0 {
                return out_of_range();
            }
            CopulaSpec::new(family, 2.0 * tau / (1.0 - tau))
        }
        Family::Gumbel => {
            if tau <= 0.0 || tau >= 1.0 {
                return out_of_range();
            }
            CopulaSpec::new(family, 1.0 / (1.0 - tau))
        }
        Family::Normal | Family::Student4 => {
            if tau <= -1.0 || tau >= 1.0 {
                return out_of_range();
            }
            CopulaSpec::new(family, (std::f64::consts::FRAC_PI_2 * tau).sin())
        }
        Family::Frank => {
            if tau <= -1.0 || tau >= 1.0 || tau == 0.0 {
                return out_of_range();
            }
            // τ is odd in θ
            let theta = bisect_increasing(frank_tau, tau.abs(), 1.0);
            CopulaSpec::new(family, theta.copysign(tau))
        }
        Family::Plackett => {
            if tau <= -1.0 || tau >= 1.0 || tau == 0.0 {
                return out_of_range();
            }
            // τ(1/θ) = −τ(θ); search on ln θ > 0
            let log_theta = bisect_increasing(|l: f64| plackett_tau(l.exp()), tau.abs(), 1.0);
            CopulaSpec::new(family, log_theta.copysign(tau).exp())
        }
    }
}

/// Solves `f(x) = target` for increasing `f` on `x > 0` with `f(0⁺) = 0`.
fn bisect_increasing<F: Fn(f64) -> f64>(f: F, target: f64, start: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = start;
    while f(hi) < target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Independent check of the tau maps: `τ = 4 ∬ C dC − 1` where the measure
/// `dC` of each cell of a `grid_size²` lattice is the rectangle
/// probability of `C`, and `C` is averaged over the cell's corners.
pub fn tau_brute(spec: &CopulaSpec, grid_size: usize) -> f64 {
    let m = grid_size.max(2);
    let t: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
    let rows: Vec<Vec<f64>> = t
        .par_iter()
        .map(|&u| t.iter().map(|&v| spec.cdf(u, v)).collect())
        .collect();
    let acc: f64 = (0..m)
        .into_par_iter()
        .map(|i| {
            let (r0, r1) = (&rows[i], &rows[i + 1]);
            (0..m)
                .map(|j| {
                    let mass = r1[j + 1] - r1[j] - r0[j + 1] + r0[j];
                    let mean = 0.25 * (r0[j] + r0[j + 1] + r1[j] + r1[j + 1]);
                    mean * mass
                })
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    4.0 * acc - 1.0
}

/// Kendall's tau of a sample (tau-a; ties count as neither concordant nor
/// discordant).
pub fn kendall_tau_empirical(sample: &Sample) -> Result<f64> {
    sample.kendall_tau()
}
