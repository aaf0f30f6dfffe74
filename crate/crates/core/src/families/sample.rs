//! Exact samplers for every family.
//!
//! Clayton and Gumbel use the Marshall–Olkin frailty construction
//! `U = ψ(E₁/M)`, `V = ψ(E₂/M)` where `ψ = φ⁻¹` is the Laplace transform of
//! the frailty `M` (gamma for Clayton, positive stable for Gumbel). Frank and
//! Plackett invert the conditional distribution `C_u(u, ·)` in closed form.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, Exp1, Gamma, Open01, StandardNormal};

use super::{CopulaSpec, Family};
use crate::data::Sample;
use crate::special::{norm_cdf, t4_cdf};

/// Draws `n` i.i.d. pairs from `spec`. Deterministic for a given stream.
pub fn sample<R: Rng + ?Sized>(spec: &CopulaSpec, n: usize, rng: &mut R) -> Sample {
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let theta = spec.theta();
    let product = spec.is_product();
    for _ in 0..n {
        let (u, v) = if product {
            (open01(rng), open01(rng))
        } else {
            match spec.family() {
                Family::Clayton => clayton(theta, rng),
                Family::Gumbel => gumbel(theta, rng),
                Family::Frank => {
                    let u = open01(rng);
                    (u, frank_conditional_inverse(theta, u, open01(rng)))
                }
                Family::Plackett => {
                    let u = open01(rng);
                    (u, plackett_conditional_inverse(theta, u, open01(rng)))
                }
                Family::Normal => normal(theta, rng),
                Family::Student4 => student(theta, rng),
                Family::Independence => unreachable!(),
            }
        };
        x.push(u);
        y.push(v);
    }
    Sample::new(x, y).expect("sampler produced finite values")
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

fn clayton<R: Rng + ?Sized>(theta: f64, rng: &mut R) -> (f64, f64) {
    let m: f64 = Gamma::new(1.0 / theta, 1.0).unwrap().sample(rng);
    let e1: f64 = Exp1.sample(rng);
    let e2: f64 = Exp1.sample(rng);
    let psi = |t: f64| (-(t.ln_1p()) / theta).exp();
    (psi(e1 / m), psi(e2 / m))
}

/// Positive stable variate with Laplace transform `exp(−t^α)` (Kanter's
/// representation of the Chambers–Mallows–Stuck method).
fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let w: f64 = std::f64::consts::PI * open01(rng);
    let e: f64 = Exp1.sample(rng);
    let a = (alpha * w).sin() / w.sin().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * w).sin() / e).powf((1.0 - alpha) / alpha);
    a * b
}

fn gumbel<R: Rng + ?Sized>(theta: f64, rng: &mut R) -> (f64, f64) {
    let alpha = 1.0 / theta;
    let m = positive_stable(alpha, rng);
    let e1: f64 = Exp1.sample(rng);
    let e2: f64 = Exp1.sample(rng);
    let psi = |t: f64| (-t.powf(alpha)).exp();
    (psi(e1 / m), psi(e2 / m))
}

/// Solves `C_u(u, v) = p` for the Frank copula.
pub(crate) fn frank_conditional_inverse(theta: f64, u: f64, p: f64) -> f64 {
    let a = (-theta * u).exp();
    let b = p * (-theta).exp_m1() / (p + (1.0 - p) * a);
    let v = -b.ln_1p() / theta;
    v.clamp(f64::MIN_POSITIVE, 1.0)
}

/// Solves `C_u(u, v) = p` for the Plackett copula.
pub(crate) fn plackett_conditional_inverse(theta: f64, u: f64, p: f64) -> f64 {
    let a = p * (1.0 - p);
    let eta = theta - 1.0;
    let b = theta + a * eta * eta;
    let c = 2.0 * a * (u * theta * theta + 1.0 - u) + theta * (1.0 - 2.0 * a);
    let d = theta.sqrt() * (theta + 4.0 * a * u * (1.0 - u) * eta * eta).sqrt();
    ((c - (1.0 - 2.0 * p) * d) / (2.0 * b)).clamp(0.0, 1.0)
}

fn normal<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> (f64, f64) {
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    let y = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
    (norm_cdf(z1), norm_cdf(y))
}

fn student<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> (f64, f64) {
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    let w: f64 = ChiSquared::new(4.0).unwrap().sample(rng);
    let scale = (w / 4.0).sqrt();
    let y = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
    (t4_cdf(z1 / scale), t4_cdf(y / scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{tau_from_theta, theta_from_tau};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conditional_inverses_solve_the_conditional_law() {
        for theta in [-6.0, 2.0, 14.0] {
            let spec = CopulaSpec::new(Family::Frank, theta).unwrap();
            for &u in &[0.05, 0.4, 0.93] {
                for &p in &[0.01, 0.3, 0.5, 0.99] {
                    let v = frank_conditional_inverse(theta, u, p);
                    assert!((spec.partial_u(u, v) - p).abs() < 1e-10, "frank {theta} {u} {p}");
                }
            }
        }
        for theta in [0.1, 4.0, 60.0] {
            let spec = CopulaSpec::new(Family::Plackett, theta).unwrap();
            for &u in &[0.05, 0.4, 0.93] {
                for &p in &[0.01, 0.3, 0.5, 0.99] {
                    let v = plackett_conditional_inverse(theta, u, p);
                    assert!((spec.partial_u(u, v) - p).abs() < 1e-10, "plackett {theta} {u} {p}");
                }
            }
        }
    }

    #[test]
    fn independence_is_reproducible() {
        let spec = CopulaSpec::independence();
        let a = sample(&spec, 4, &mut ChaCha8Rng::seed_from_u64(7));
        let b = sample(&spec, 4, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        assert!(a.pairs().all(|(u, v)| u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0));
    }

    #[test]
    fn clayton_and_normal_hit_target_tau() {
        let clayton = CopulaSpec::new(Family::Clayton, 2.0).unwrap();
        let s = sample(&clayton, 20_000, &mut ChaCha8Rng::seed_from_u64(1));
        assert!((s.kendall_tau().unwrap() - 0.5).abs() < 0.02);

        let rho = (std::f64::consts::PI * 0.25 / 2.0).sin();
        let normal = CopulaSpec::new(Family::Normal, rho).unwrap();
        let s = sample(&normal, 20_000, &mut ChaCha8Rng::seed_from_u64(2));
        assert!((s.kendall_tau().unwrap() - 0.25).abs() < 0.02);
    }

    #[test]
    fn frank_sampler_matches_inverted_tau() {
        let spec = theta_from_tau(Family::Frank, 0.5).unwrap();
        assert!((tau_from_theta(&spec) - 0.5).abs() < 1e-8);
        let s = sample(&spec, 20_000, &mut ChaCha8Rng::seed_from_u64(3));
        assert!((s.kendall_tau().unwrap() - 0.5).abs() < 0.02);
    }

    #[test]
    fn negative_dependence_samplers() {
        for (family, tau) in [(Family::Frank, -0.4), (Family::Plackett, -0.3), (Family::Normal, -0.6)] {
            let spec = theta_from_tau(family, tau).unwrap();
            let s = sample(&spec, 20_000, &mut ChaCha8Rng::seed_from_u64(4));
            assert!((s.kendall_tau().unwrap() - tau).abs() < 0.02, "{spec}");
        }
    }
}
