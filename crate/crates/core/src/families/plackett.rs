//! Plackett copula, `θ > 0`, `θ ≠ 1`.
//!
//! With `η = θ − 1`, `S = 1 + η(u + v)` and `R = √(S² − 4θηuv)`:
//! `C = (S − R) / (2η) = 2θuv / (S + R)`.

fn parts(theta: f64, u: f64, v: f64) -> (f64, f64) {
    let eta = theta - 1.0;
    let s = 1.0 + eta * (u + v);
    let r2 = s * s - 4.0 * theta * eta * u * v;
    (s, r2.max(0.0).sqrt())
}

pub(crate) fn cdf(theta: f64, u: f64, v: f64) -> f64 {
    let (s, r) = parts(theta, u, v);
    2.0 * theta * u * v / (s + r)
}

pub(crate) fn partial_u(theta: f64, u: f64, v: f64) -> f64 {
    let (s, r) = parts(theta, u, v);
    0.5 * (1.0 - (s - 2.0 * theta * v) / r)
}

/// `(C_uu, C_uv)`; `C_uv` is the Plackett density.
pub(crate) fn second(theta: f64, u: f64, v: f64) -> (f64, f64) {
    let eta = theta - 1.0;
    let (_, r) = parts(theta, u, v);
    let r3 = r * r * r;
    let c_uu = -2.0 * eta * theta * v * (1.0 - v) / r3;
    let c_uv = theta * (1.0 + eta * (u + v - 2.0 * u * v)) / r3;
    (c_uu, c_uv)
}
