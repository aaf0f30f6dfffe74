//! Parametric bivariate copula families.
//!
//! Each [`CopulaSpec`] evaluates its distribution function, first and second
//! partial derivatives, draws samples and maps its parameter to and from
//! Kendall's tau. The Archimedean families (Clayton, Gumbel, Frank) share a
//! generator-based implementation of the derivatives; the normal and
//! Student (four degrees of freedom) copulas are evaluated through their
//! closed-form conditional distributions, with the distribution function
//! obtained by one-dimensional quadrature.

mod archimedean;
mod elliptical;
mod plackett;
mod sample;
mod tau;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use sample::sample;
pub use tau::{kendall_tau_empirical, tau_brute, tau_from_theta, theta_from_tau};

/// Arguments closer than this to 0 or 1 are clamped before evaluating
/// first partial derivatives.
pub const PARTIAL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Independence,
    Clayton,
    Gumbel,
    Frank,
    Plackett,
    Normal,
    Student4,
}

impl Family {
    pub const PARAMETRIC: [Family; 6] = [
        Family::Clayton,
        Family::Gumbel,
        Family::Frank,
        Family::Plackett,
        Family::Normal,
        Family::Student4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Independence => "independence",
            Family::Clayton => "clayton",
            Family::Gumbel => "gumbel",
            Family::Frank => "frank",
            Family::Plackett => "plackett",
            Family::Normal => "normal",
            Family::Student4 => "student4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "independence" | "indep" | "pi" => Ok(Family::Independence),
            "clayton" => Ok(Family::Clayton),
            "gumbel" => Ok(Family::Gumbel),
            "frank" => Ok(Family::Frank),
            "plackett" => Ok(Family::Plackett),
            "normal" | "gaussian" => Ok(Family::Normal),
            "student4" | "student" | "t4" => Ok(Family::Student4),
            other => Err(Error::Input(format!("unknown copula family '{other}'"))),
        }
    }
}

/// A copula family together with its parameter.
///
/// For `Normal` and `Student4` the parameter is the correlation `ρ`; the
/// Student copula always has four degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopulaSpec {
    family: Family,
    theta: f64,
}

impl CopulaSpec {
    pub fn new(family: Family, theta: f64) -> Result<Self> {
        let bad = |domain| {
            Err(Error::ParameterDomain {
                family: family.name(),
                value: theta,
                domain,
            })
        };
        if !theta.is_finite() && family != Family::Independence {
            return bad("finite values");
        }
        match family {
            Family::Independence => {}
            Family::Clayton if theta < 0.0 => return bad("theta >= 0"),
            Family::Gumbel if theta < 1.0 => return bad("theta >= 1"),
            Family::Frank if theta == 0.0 => return bad("theta != 0"),
            Family::Plackett if theta <= 0.0 || theta == 1.0 => return bad("theta > 0, theta != 1"),
            Family::Normal | Family::Student4 if theta <= -1.0 || theta >= 1.0 => {
                return bad("-1 < rho < 1")
            }
            _ => {}
        }
        Ok(CopulaSpec { family, theta })
    }

    pub fn independence() -> Self {
        CopulaSpec {
            family: Family::Independence,
            theta: 0.0,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Whether the parameter value makes the copula the product copula.
    fn is_product(&self) -> bool {
        match self.family {
            Family::Independence => true,
            Family::Clayton => self.theta == 0.0,
            Family::Gumbel => self.theta == 1.0,
            Family::Normal | Family::Student4 => false,
            _ => false,
        }
    }

    /// `C(u, v)`. Arguments are clamped into `[0, 1]`.
    pub fn cdf(&self, u: f64, v: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let v = v.clamp(0.0, 1.0);
        if u == 0.0 || v == 0.0 {
            return 0.0;
        }
        if u == 1.0 {
            return v;
        }
        if v == 1.0 {
            return u;
        }
        if self.is_product() {
            return u * v;
        }
        let c = match self.family {
            Family::Clayton => archimedean::clayton_cdf(self.theta, u, v),
            Family::Gumbel => archimedean::gumbel_cdf(self.theta, u, v),
            Family::Frank => archimedean::frank_cdf(self.theta, u, v),
            Family::Plackett => plackett::cdf(self.theta, u, v),
            Family::Normal => elliptical::normal_cdf(self.theta, u, v),
            Family::Student4 => elliptical::student_cdf(self.theta, u, v),
            Family::Independence => unreachable!(),
        };
        c.clamp((u + v - 1.0).max(0.0), u.min(v))
    }

    /// `∂C/∂u`, the conditional distribution of `V` given `U = u`.
    ///
    /// At `v ∈ {0, 1}` the exact limits 0 and 1 are returned; `u` is
    /// clamped into `[ε, 1 - ε]` with `ε` = [`PARTIAL_EPS`].
    pub fn partial_u(&self, u: f64, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        if v >= 1.0 {
            return 1.0;
        }
        let u = u.clamp(PARTIAL_EPS, 1.0 - PARTIAL_EPS);
        if self.is_product() {
            return v;
        }
        let d = match self.family {
            Family::Clayton => archimedean::Generator::Clayton(self.theta).partial_u(u, v),
            Family::Gumbel => archimedean::Generator::Gumbel(self.theta).partial_u(u, v),
            Family::Frank => archimedean::Generator::Frank(self.theta).partial_u(u, v),
            Family::Plackett => plackett::partial_u(self.theta, u, v),
            Family::Normal => elliptical::normal_partial_u(self.theta, u, v),
            Family::Student4 => elliptical::student_partial_u(self.theta, u, v),
            Family::Independence => unreachable!(),
        };
        d.clamp(0.0, 1.0)
    }

    /// `∂C/∂v`. All families here are exchangeable.
    pub fn partial_v(&self, u: f64, v: f64) -> f64 {
        self.partial_u(v, u)
    }

    /// `(C_uu, C_uv, C_vv)` at an interior point.
    pub fn second_partials(&self, u: f64, v: f64) -> Result<(f64, f64, f64)> {
        if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
            return Err(Error::Boundary { u, v });
        }
        if self.is_product() {
            return Ok((0.0, 1.0, 0.0));
        }
        let uu_uv = |u: f64, v: f64| -> (f64, f64) {
            match self.family {
                Family::Clayton => archimedean::Generator::Clayton(self.theta).second(u, v),
                Family::Gumbel => archimedean::Generator::Gumbel(self.theta).second(u, v),
                Family::Frank => archimedean::Generator::Frank(self.theta).second(u, v),
                Family::Plackett => plackett::second(self.theta, u, v),
                Family::Normal => elliptical::normal_second(self.theta, u, v),
                Family::Student4 => elliptical::student_second(self.theta, u, v),
                Family::Independence => unreachable!(),
            }
        };
        let (c_uu, c_uv) = uu_uv(u, v);
        let (c_vv, _) = uu_uv(v, u);
        Ok((c_uu, c_uv, c_vv))
    }
}

impl fmt::Display for CopulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.theta)
    }
}
