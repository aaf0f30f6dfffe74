//! Univariate special functions used by the elliptical copulas and the
//! transformation estimator: the standard normal law and Student's t with
//! four (and five) degrees of freedom.
//!
//! The t₄ and t₅ laws admit elementary closed forms, so no incomplete-beta
//! machinery is needed. The normal CDF is built on `libm::erfc`; the normal
//! quantile uses Wichura's AS 241 rational approximation followed by one
//! Newton step taken in the lower tail.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function.
pub fn norm_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal quantile. Returns `-inf` at 0 and `+inf` at 1.
pub fn norm_ppf(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    // Work with the smaller tail so that the Newton residual is computed
    // without cancellation; 1 - p is exact for p >= 1/2.
    let upper = p > 0.5;
    let tail = if upper { 1.0 - p } else { p };
    let mut x = as241(tail);
    let pdf = norm_pdf(x);
    if pdf > 0.0 {
        x -= (norm_cdf(x) - tail) / pdf;
    }
    if upper {
        -x
    } else {
        x
    }
}

fn poly(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

// Wichura (1988), Algorithm AS 241, PPND16.
fn as241(p: f64) -> f64 {
    const A: [f64; 8] = [
        3.387_132_872_796_366_608,
        1.331_416_678_917_843_774_5e2,
        1.971_590_950_306_551_442_7e3,
        1.373_169_376_550_946_112_5e4,
        4.592_195_393_154_987_145_7e4,
        6.726_577_092_700_870_085_3e4,
        3.343_057_558_358_812_810_5e4,
        2.509_080_928_730_122_672_7e3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.231_333_070_160_091_125_2e1,
        6.871_870_074_920_579_083e2,
        5.394_196_021_424_751_107_7e3,
        2.121_379_430_158_659_586_7e4,
        3.930_789_580_009_271_061e4,
        2.872_908_573_572_194_267_4e4,
        5.226_495_278_852_854_561e3,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34,
        4.630_337_846_156_545_295_9,
        5.769_497_221_460_691_405_5,
        3.647_848_324_763_204_605_04,
        1.270_458_252_452_368_382_58,
        2.417_807_251_774_506_117_7e-1,
        2.272_384_498_926_918_458_33e-2,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_758_821_87,
        1.676_384_830_183_803_849_4,
        6.897_673_349_851_000_045_5e-1,
        1.481_039_764_274_800_745_9e-1,
        1.519_866_656_361_645_719_66e-2,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2,
        5.463_784_911_164_114_369_9,
        1.784_826_539_917_291_335_8,
        2.965_605_718_285_048_912_3e-1,
        2.653_218_952_657_612_309_3e-2,
        1.242_660_947_388_078_438_6e-3,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.998_322_065_558_879_376_9e-1,
        1.369_298_809_227_358_053_1e-1,
        1.487_536_129_085_061_485_25e-2,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        r -= 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        r -= 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

/// Density of Student's t with four degrees of freedom.
pub fn t4_pdf(x: f64) -> f64 {
    let s = 1.0 + 0.25 * x * x;
    0.375 / (s * s * s.sqrt())
}

/// Derivative of the t₄ density.
pub fn t4_pdf_deriv(x: f64) -> f64 {
    let s = 1.0 + 0.25 * x * x;
    -0.375 * 1.25 * x / (s * s * s * s.sqrt())
}

/// Lower tail of t₄ at `-|x|`, written as `(1 - a)²(2 + a)/4` with
/// `a = |x| / sqrt(x² + 4)` and `1 - a` formed without cancellation.
fn t4_lower_tail(ax: f64) -> f64 {
    let s = (ax * ax + 4.0).sqrt();
    let one_minus_a = 4.0 / (s * (s + ax));
    let a = ax / s;
    one_minus_a * one_minus_a * (2.0 + a) / 4.0
}

/// Distribution function of Student's t with four degrees of freedom.
pub fn t4_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    let tail = t4_lower_tail(x.abs());
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Quantile of Student's t with four degrees of freedom.
///
/// Closed form `2 sign(p - 1/2) sqrt(cos(acos(sqrt α)/3)/sqrt α - 1)` with
/// `α = 4p(1 - p)`, polished by Newton steps on the lower tail.
pub fn t4_ppf(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    if p == 0.5 {
        return 0.0;
    }
    let upper = p > 0.5;
    let tail = if upper { 1.0 - p } else { p };
    let alpha = 4.0 * tail * (1.0 - tail);
    let sa = alpha.sqrt();
    let q = ((sa.acos() / 3.0).cos() / sa - 1.0).max(0.0);
    // Magnitude of the quantile; refine |x| against the lower tail.
    let mut ax = 2.0 * q.sqrt();
    for _ in 0..2 {
        let pdf = t4_pdf(ax);
        if pdf <= 0.0 {
            break;
        }
        // lower tail at -ax is decreasing in ax
        ax += (t4_lower_tail(ax) - tail) / pdf;
    }
    if upper {
        ax
    } else {
        -ax
    }
}

/// Distribution function of Student's t with five degrees of freedom.
pub fn t5_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let th = (x / 5f64.sqrt()).atan();
    let (s, c) = th.sin_cos();
    0.5 + (th + s * c * (1.0 + 2.0 / 3.0 * c * c)) / PI
}

/// Density of Student's t with five degrees of freedom.
pub fn t5_pdf(x: f64) -> f64 {
    let s = 1.0 + x * x / 5.0;
    8.0 / (3.0 * PI * 5f64.sqrt()) / (s * s * s)
}
