//! Archimedean copulas `C(u, v) = φ⁻¹(φ(u) + φ(v))`.
//!
//! Derivatives follow from differentiating the generator identity:
//!
//! ```text
//! C_u  = φ'(u) / φ'(C)
//! C_uu = φ''(u) / φ'(C) − φ'(u)² φ''(C) / φ'(C)³
//! C_uv = −φ'(u) φ'(v) φ''(C) / φ'(C)³
//! ```

#[derive(Debug, Clone, Copy)]
pub(crate) enum Generator {
    /// `φ(t) = (t^{-θ} − 1)/θ`, θ > 0
    Clayton(f64),
    /// `φ(t) = (−ln t)^θ`, θ ≥ 1
    Gumbel(f64),
    /// `φ(t) = −ln((e^{−θt} − 1)/(e^{−θ} − 1))`, θ ≠ 0
    Frank(f64),
}

impl Generator {
    fn cdf(self, u: f64, v: f64) -> f64 {
        match self {
            Generator::Clayton(t) => clayton_cdf(t, u, v),
            Generator::Gumbel(t) => gumbel_cdf(t, u, v),
            Generator::Frank(t) => frank_cdf(t, u, v),
        }
    }

    fn d1(self, x: f64) -> f64 {
        match self {
            Generator::Clayton(t) => -x.powf(-t - 1.0),
            Generator::Gumbel(t) => {
                let l = -x.ln();
                -t * l.powf(t - 1.0) / x
            }
            Generator::Frank(t) => -t / (t * x).exp_m1(),
        }
    }

    fn d2(self, x: f64) -> f64 {
        match self {
            Generator::Clayton(t) => (t + 1.0) * x.powf(-t - 2.0),
            Generator::Gumbel(t) => {
                let l = -x.ln();
                // (θ − 1) l^{θ−2} is taken as 0 when θ = 1
                let first = if t == 1.0 { 0.0 } else { (t - 1.0) * l.powf(t - 2.0) };
                t * (first + l.powf(t - 1.0)) / (x * x)
            }
            Generator::Frank(t) => {
                let e = (t * x).exp_m1();
                t * t * (e + 1.0) / (e * e)
            }
        }
    }

    pub(crate) fn partial_u(self, u: f64, v: f64) -> f64 {
        let c = self.cdf(u, v);
        if let Generator::Clayton(t) = self {
            // (C/u)^{θ+1}, the same ratio without forming two large powers
            return (c / u).powf(t + 1.0);
        }
        self.d1(u) / self.d1(c)
    }

    /// `(C_uu, C_uv)` at `(u, v)`.
    pub(crate) fn second(self, u: f64, v: f64) -> (f64, f64) {
        let c = self.cdf(u, v);
        let gc1 = self.d1(c);
        let gc2 = self.d2(c);
        let gu1 = self.d1(u);
        let gv1 = self.d1(v);
        let gc1_cubed = gc1 * gc1 * gc1;
        let c_uu = self.d2(u) / gc1 - gu1 * gu1 * gc2 / gc1_cubed;
        let c_uv = -gu1 * gv1 * gc2 / gc1_cubed;
        (c_uu, c_uv)
    }
}

pub(crate) fn clayton_cdf(theta: f64, u: f64, v: f64) -> f64 {
    let a = u.powf(-theta);
    let b = v.powf(-theta);
    let s = a + b - 1.0;
    if s.is_finite() {
        return s.powf(-1.0 / theta);
    }
    // log-sum-exp of −θ ln u and −θ ln v; the −1 is negligible here
    let la = -theta * u.ln();
    let lb = -theta * v.ln();
    let m = la.max(lb);
    let ls = m + ((la - m).exp() + (lb - m).exp()).ln();
    (-ls / theta).exp()
}

pub(crate) fn gumbel_cdf(theta: f64, u: f64, v: f64) -> f64 {
    let x = (-u.ln()).powf(theta);
    let y = (-v.ln()).powf(theta);
    (-(x + y).powf(1.0 / theta)).exp()
}

pub(crate) fn frank_cdf(theta: f64, u: f64, v: f64) -> f64 {
    let num = (-theta * u).exp_m1() * (-theta * v).exp_m1();
    -(num / (-theta).exp_m1()).ln_1p() / theta
}
