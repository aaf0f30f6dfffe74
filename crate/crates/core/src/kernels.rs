//! The Epanechnikov kernel, its local-linear boundary version and the
//! bandwidth-shrink function.
//!
//! The local-linear kernel at `(u, h)` is
//!
//! ```text
//! k_{u,h}(x) = k(x) (a₂ − a₁x) / (a₀a₂ − a₁²)   on   ((u − 1)/h, u/h)
//! ```
//!
//! with truncated moments `a_l = ∫ t^l k(t) dt` over the same interval. Since
//! `k_{u,h}` is a cubic on its support, its distribution function is a quartic
//! and is evaluated exactly.

use crate::error::{Error, Result};

/// Largest bandwidth accepted by the boundary-corrected estimators.
pub const H_MAX: f64 = 0.25;

/// Largest `h` for the shrunk-bandwidth estimators. Their widest kernel,
/// at `b(1/2) h`, then has half-width [`H_MAX`].
pub const H_MAX_SHRUNK: f64 = H_MAX * std::f64::consts::SQRT_2;

/// Epanechnikov density `¾(1 − x²)` on `[−1, 1]`.
pub fn k(x: f64) -> f64 {
    if x.abs() <= 1.0 {
        0.75 * (1.0 - x * x)
    } else {
        0.0
    }
}

/// Distribution function of [`k`].
pub fn kernel_cdf(x: f64) -> f64 {
    if x <= -1.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        (2.0 + 3.0 * x - x * x * x) / 4.0
    }
}

/// `σ_K² = ∫ t² k(t) dt`.
pub fn sigma2_k() -> f64 {
    0.2
}

/// `b_K = 2 ∫ t k(t) K(t) dt`.
pub fn b_k() -> f64 {
    9.0 / 35.0
}

/// `b(w) = min(√w, √(1 − w))`.
pub fn shrink(w: f64) -> f64 {
    w.min(1.0 - w).max(0.0).sqrt()
}

// antiderivatives of t^l k(t)
fn prim(l: u32, t: f64) -> f64 {
    let t2 = t * t;
    match l {
        0 => 0.25 * t * (3.0 - t2),
        1 => 0.75 * t2 * (0.5 - 0.25 * t2),
        2 => 0.75 * t2 * t * (1.0 / 3.0 - 0.2 * t2),
        _ => panic!("moment order {l} not supported"),
    }
}

fn support(u: f64, h: f64) -> (f64, f64) {
    (((u - 1.0) / h).max(-1.0), (u / h).min(1.0))
}

/// Truncated moment `a_l(u, h)`, `l ∈ {0, 1, 2}`.
pub fn a_l(u: f64, h: f64, l: u32) -> f64 {
    let (lo, hi) = support(u, h);
    if lo >= hi {
        return 0.0;
    }
    prim(l, hi) - prim(l, lo)
}

/// The local-linear kernel `k_{u,h}` with its moments precomputed.
#[derive(Debug, Clone, Copy)]
pub struct LocalLinear {
    lo: f64,
    hi: f64,
    a1: f64,
    a2: f64,
    den: f64,
    base: f64,
}

impl LocalLinear {
    pub fn new(u: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::DegenerateKernel { u, h });
        }
        let (lo, hi) = support(u, h);
        let a0 = a_l(u, h, 0);
        let a1 = a_l(u, h, 1);
        let a2 = a_l(u, h, 2);
        let den = a0 * a2 - a1 * a1;
        if !(den > 1e-300) {
            return Err(Error::DegenerateKernel { u, h });
        }
        let base = a2 * prim(0, lo) - a1 * prim(1, lo);
        Ok(LocalLinear {
            lo,
            hi,
            a1,
            a2,
            den,
            base,
        })
    }

    /// Support `[lo, hi]` of the kernel.
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        k(x) * (self.a2 - self.a1 * x) / self.den
    }

    /// `K_{u,h}(x) = ∫_{−∞}^x k_{u,h}`; exactly 0 below and 1 above the support.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            0.0
        } else if x >= self.hi {
            1.0
        } else {
            (self.a2 * prim(0, x) - self.a1 * prim(1, x) - self.base) / self.den
        }
    }
}

/// `k_{u,h}(x)`.
pub fn k_loc(u: f64, h: f64, x: f64) -> Result<f64> {
    Ok(LocalLinear::new(u, h)?.pdf(x))
}

/// `K_{u,h}(x)`.
pub fn k_loc_cdf(u: f64, h: f64, x: f64) -> Result<f64> {
    Ok(LocalLinear::new(u, h)?.cdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn kernel_values() {
        assert_eq!(k(0.0), 0.75);
        assert_eq!(k(1.0), 0.0);
        assert_eq!(k(-1.0), 0.0);
        assert_eq!(k(0.5), 0.5625);
        assert_eq!(k(1.5), 0.0);
        assert_eq!(kernel_cdf(0.0), 0.5);
        assert_eq!(kernel_cdf(1.0), 1.0);
        assert_eq!(kernel_cdf(-1.0), 0.0);
        assert_eq!(kernel_cdf(0.5), 0.84375);
        assert_eq!(kernel_cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(kernel_cdf(f64::INFINITY), 1.0);
    }

    #[test]
    fn cdf_matches_quadrature() {
        for i in 0..=40 {
            let x = -1.0 + i as f64 / 20.0;
            let q = quad::adaptive(k, -1.0, x, 1e-14);
            assert!((kernel_cdf(x) - q).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn constants_match_quadrature() {
        let s2 = quad::adaptive(|t| t * t * k(t), -1.0, 1.0, 1e-15);
        let bk = 2.0 * quad::adaptive(|t| t * k(t) * kernel_cdf(t), -1.0, 1.0, 1e-15);
        assert!((sigma2_k() - s2).abs() < 1e-12);
        assert!((b_k() - bk).abs() < 1e-12);
    }

    #[test]
    fn shrink_values() {
        assert_eq!(shrink(0.25), 0.5);
        assert_eq!(shrink(0.0), 0.0);
        assert_eq!(shrink(1.0), 0.0);
        assert!((shrink(0.5) - 0.5f64.sqrt()).abs() < 1e-15);
        for i in 0..=100 {
            let w = i as f64 / 100.0;
            assert!((shrink(w) - shrink(1.0 - w)).abs() < 1e-15);
        }
    }

    #[test]
    fn moments() {
        assert!((a_l(0.5, 0.1, 0) - 1.0).abs() < 1e-15);
        assert!(a_l(0.5, 0.1, 1).abs() < 1e-15);
        // t k(t) vanishes below −1, so the rule is applied on the support
        // (−9.5, 0.5) ∩ [−1, 1], where the integrand is a polynomial
        let a1 = a_l(0.05, 0.1, 1);
        let q = quad::rule64().integrate(|t| t * k(t), -1.0, 0.5);
        assert!(a1 < 0.0);
        assert!((a1 - q).abs() < 1e-12);
    }

    #[test]
    fn local_linear_moment_conditions() {
        for i in 0..20 {
            let u = i as f64 / 19.0;
            for j in 1..=10 {
                let h = 0.025 * j as f64;
                let kl = LocalLinear::new(u, h).unwrap();
                let (lo, hi) = kl.support();
                let m0 = quad::rule64().integrate(|x| kl.pdf(x), lo, hi);
                let m1 = quad::rule64().integrate(|x| x * kl.pdf(x), lo, hi);
                assert!((m0 - 1.0).abs() < 1e-10, "{u} {h}");
                assert!(m1.abs() < 1e-10, "{u} {h}");
            }
        }
    }

    #[test]
    fn interior_reduction() {
        for &(u, h) in &[(0.5, 0.1), (0.1, 0.1), (0.9, 0.1), (0.3, 0.25)] {
            let kl = LocalLinear::new(u, h).unwrap();
            for i in 0..=200 {
                let x = -1.0 + i as f64 / 100.0;
                assert!((kl.pdf(x) - k(x)).abs() < 1e-12);
                assert!((kl.cdf(x) - kernel_cdf(x)).abs() < 1e-12);
            }
        }
        assert_eq!(k_loc_cdf(0.5, 0.1, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn boundary_cdf_matches_quadrature() {
        let kl = LocalLinear::new(0.05, 0.1).unwrap();
        let q = quad::adaptive(|x| kl.pdf(x), -1.0, 0.25, 1e-14);
        assert!((kl.cdf(0.25) - q).abs() < 1e-10);
        for &(u, h) in &[(0.0, 0.1), (0.02, 0.25), (0.97, 0.2), (1.0, 0.05)] {
            let kl = LocalLinear::new(u, h).unwrap();
            let (lo, hi) = kl.support();
            assert_eq!(kl.cdf(lo), 0.0);
            assert_eq!(kl.cdf(hi), 1.0);
            assert!((kl.cdf(hi - 1e-13) - 1.0).abs() < 1e-10);
            for i in 0..=50 {
                let x = lo + (hi - lo) * i as f64 / 50.0;
                let q = quad::adaptive(|t| kl.pdf(t), lo, x, 1e-14);
                assert!((kl.cdf(x) - q).abs() < 1e-10, "{u} {h} {x}");
            }
        }
    }

    #[test]
    fn degenerate_bandwidth_is_rejected() {
        assert!(matches!(
            LocalLinear::new(0.5, 0.0),
            Err(Error::DegenerateKernel { .. })
        ));
        assert!(LocalLinear::new(0.5, f64::NAN).is_err());
    }
}
