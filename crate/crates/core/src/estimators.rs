//! Pseudo-observations and the copula estimators.
//!
//! Every estimator is a sum over pseudo-observations of a product of two
//! one-dimensional weights,
//!
//! ```text
//! Ĉ(u, v) = (1/n) Σᵢ wᵤ(û_i) · w_v(v̂_i),
//! ```
//!
//! so grid evaluation computes the weight vectors once per grid coordinate and
//! then forms the products. Pointwise evaluation goes through the same code
//! and produces identical floating point results.

use std::fmt;
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Sample;
use crate::error::{Error, Result};
use crate::kernels::{kernel_cdf, shrink, LocalLinear, H_MAX, H_MAX_SHRUNK};
use crate::special::norm_ppf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PseudoVariant {
    /// `rank / (n + 1)`
    #[default]
    Shifted,
    /// `(2 rank − 1) / (2n)`
    Centered,
}

impl FromStr for PseudoVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shifted" | "shifted_e" => Ok(PseudoVariant::Shifted),
            "centered" => Ok(PseudoVariant::Centered),
            other => Err(Error::Input(format!("unknown pseudo-observation variant '{other}'"))),
        }
    }
}

/// Rank-transformed pairs in `(0, 1)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSample {
    u: Vec<f64>,
    v: Vec<f64>,
    variant: PseudoVariant,
}

impl PseudoSample {
    /// Wraps points already in `(0, 1)²`.
    pub fn from_points(u: Vec<f64>, v: Vec<f64>, variant: PseudoVariant) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Input("coordinate lengths differ".into()));
        }
        if u.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if let Some(bad) = u.iter().chain(&v).find(|&&w| !(w > 0.0 && w < 1.0)) {
            return Err(Error::Input(format!("pseudo-observation {bad} outside (0, 1)")));
        }
        Ok(PseudoSample { u, v, variant })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn variant(&self) -> PseudoVariant {
        self.variant
    }

    pub fn kendall_tau(&self) -> Result<f64> {
        crate::data::kendall_tau(&self.u, &self.v)
    }
}

/// Average ranks (1-based) and whether any ties occurred.
fn ranks(x: &[f64]) -> (Vec<f64>, bool) {
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; n];
    let mut tied = false;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        if j - i > 1 {
            tied = true;
        }
        let avg = 0.5 * ((i + 1) + j) as f64;
        for &k in &idx[i..j] {
            r[k] = avg;
        }
        i = j;
    }
    (r, tied)
}

/// Coordinate-wise rank transform of `sample`.
pub fn pseudo_obs(sample: &Sample, variant: PseudoVariant) -> Result<PseudoSample> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let scale = |r: f64| match variant {
        PseudoVariant::Shifted => r / (nf + 1.0),
        PseudoVariant::Centered => (2.0 * r - 1.0) / (2.0 * nf),
    };
    let (rx, tx) = ranks(sample.x());
    let (ry, ty) = ranks(sample.y());
    if tx || ty {
        warn!("ties in the data; using average ranks");
    }
    Ok(PseudoSample {
        u: rx.into_iter().map(scale).collect(),
        v: ry.into_iter().map(scale).collect(),
        variant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    /// Empirical copula.
    E,
    /// Local-linear kernel.
    LL,
    /// Local-linear kernel with shrunk bandwidth.
    LLS,
    /// Mirror reflection.
    MR,
    /// Mirror reflection with shrunk bandwidth.
    MRS,
    /// Smoothing on the normal-score scale.
    T,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 6] = [
        EstimatorKind::E,
        EstimatorKind::LL,
        EstimatorKind::LLS,
        EstimatorKind::MR,
        EstimatorKind::MRS,
        EstimatorKind::T,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::E => "e",
            EstimatorKind::LL => "ll",
            EstimatorKind::LLS => "lls",
            EstimatorKind::MR => "mr",
            EstimatorKind::MRS => "mrs",
            EstimatorKind::T => "t",
        }
    }

    pub fn uses_bandwidth(self) -> bool {
        self != EstimatorKind::E
    }

    pub fn is_shrunk(self) -> bool {
        matches!(self, EstimatorKind::LLS | EstimatorKind::MRS)
    }

    /// Upper end of the admissible bandwidths.
    pub fn max_bandwidth(self) -> f64 {
        match self {
            EstimatorKind::E | EstimatorKind::T => f64::INFINITY,
            EstimatorKind::LL | EstimatorKind::MR => H_MAX,
            EstimatorKind::LLS | EstimatorKind::MRS => H_MAX_SHRUNK,
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Input(format!("unknown estimator '{s}'")))
    }
}

/// How the bandwidth of a kernel estimator is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthChoice {
    Fixed(f64),
    /// The plug-in rule matching the estimator kind.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub kind: EstimatorKind,
    pub bandwidth: BandwidthChoice,
    pub variant: PseudoVariant,
}

impl EstimatorConfig {
    pub fn new(kind: EstimatorKind, bandwidth: BandwidthChoice) -> Self {
        EstimatorConfig {
            kind,
            bandwidth,
            variant: PseudoVariant::Shifted,
        }
    }

    pub fn auto(kind: EstimatorKind) -> Self {
        EstimatorConfig::new(kind, BandwidthChoice::Auto)
    }

    pub fn fixed(kind: EstimatorKind, h: f64) -> Self {
        EstimatorConfig::new(kind, BandwidthChoice::Fixed(h))
    }

    pub fn with_variant(mut self, variant: PseudoVariant) -> Self {
        self.variant = variant;
        self
    }
}

/// Regular `m × m` lattice on `[0, 1]²`, sharing one set of coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalGrid {
    points: Vec<f64>,
}

impl EvalGrid {
    pub const DEFAULT_SIZE: usize = 101;

    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Input(format!("grid size {m} is below 2")));
        }
        let last = (m - 1) as f64;
        Ok(EvalGrid {
            points: (0..m).map(|j| j as f64 / last).collect(),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for EvalGrid {
    fn default() -> Self {
        EvalGrid::new(EvalGrid::DEFAULT_SIZE).unwrap()
    }
}

/// An estimator bound to a pseudo-sample and bandwidth.
#[derive(Debug, Clone)]
pub struct Estimator<'a> {
    ps: &'a PseudoSample,
    kind: EstimatorKind,
    h: f64,
    // normal scores of the pseudo-observations, for T
    scores: Option<(Vec<f64>, Vec<f64>)>,
}

impl<'a> Estimator<'a> {
    /// `h` is ignored for [`EstimatorKind::E`]; otherwise it must lie in
    /// `(0, kind.max_bandwidth()]`.
    pub fn new(ps: &'a PseudoSample, kind: EstimatorKind, h: f64) -> Result<Self> {
        match kind {
            EstimatorKind::E => {}
            _ => {
                if !(h > 0.0 && h.is_finite() && h <= kind.max_bandwidth()) {
                    return Err(Error::Bandwidth(h));
                }
            }
        }
        let scores = (kind == EstimatorKind::T).then(|| {
            (
                ps.u.iter().map(|&w| norm_ppf(w)).collect(),
                ps.v.iter().map(|&w| norm_ppf(w)).collect(),
            )
        });
        Ok(Estimator {
            ps,
            kind,
            h,
            scores,
        })
    }

    pub fn kind(&self) -> EstimatorKind {
        self.kind
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn pseudo_sample(&self) -> &PseudoSample {
        self.ps
    }

    /// The weights at coordinate `t` for the first (`axis = 0`) or second axis.
    fn weights(&self, axis: usize, t: f64) -> Vec<f64> {
        let data = if axis == 0 { &self.ps.u } else { &self.ps.v };
        let h = self.h;
        match self.kind {
            EstimatorKind::E => data.iter().map(|&c| indicator(c <= t)).collect(),
            EstimatorKind::LL => local_linear_weights(data, t, h),
            EstimatorKind::LLS => local_linear_weights(data, t, shrink(t) * h),
            EstimatorKind::MR => data.iter().map(|&c| mirror_weight(c, t, h)).collect(),
            EstimatorKind::MRS => {
                let hb = shrink(t) * h;
                data.iter().map(|&c| mirror_weight(c, t, hb)).collect()
            }
            EstimatorKind::T => {
                let (su, sv) = self.scores.as_ref().unwrap();
                let scores = if axis == 0 { su } else { sv };
                let z = norm_ppf(t);
                scores.iter().map(|&s| kernel_cdf((z - s) / h)).collect()
            }
        }
    }

    fn combine(&self, a: &[f64], b: &[f64]) -> f64 {
        let s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        s / a.len() as f64
    }

    /// `Ĉ(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.combine(&self.weights(0, u), &self.weights(1, v))
    }

    /// `Ĉ` at every lattice point, indexed `[j][k]` for `(u_j, v_k)`.
    pub fn eval_grid(&self, grid: &EvalGrid) -> Vec<Vec<f64>> {
        self.eval_lattice(grid.points(), grid.points())
    }

    /// `Ĉ(us[j], vs[k])` for all `j, k`.
    pub fn eval_lattice(&self, us: &[f64], vs: &[f64]) -> Vec<Vec<f64>> {
        let wu: Vec<Vec<f64>> = us.par_iter().map(|&u| self.weights(0, u)).collect();
        let wv: Vec<Vec<f64>> = vs.par_iter().map(|&v| self.weights(1, v)).collect();
        wu.par_iter()
            .map(|a| wv.iter().map(|b| self.combine(a, b)).collect())
            .collect()
    }

    /// `Ĉ(û_i, v̂_i)` for every pseudo-observation.
    pub fn eval_at_pseudo(&self) -> Vec<f64> {
        self.ps
            .u
            .iter()
            .zip(&self.ps.v)
            .map(|(&u, &v)| self.eval(u, v))
            .collect()
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn local_linear_weights(data: &[f64], t: f64, h: f64) -> Vec<f64> {
    if h <= 0.0 {
        // zero-bandwidth limit
        return data.iter().map(|&c| indicator(c <= t)).collect();
    }
    let kl = LocalLinear::new(t, h).expect("local-linear kernel is nondegenerate for h <= 1/4");
    data.iter().map(|&c| kl.cdf((t - c) / h)).collect()
}

/// `Σ_r [K((t − r)/h) − K(−r/h)]` over the reflections `r ∈ {−c, c, 2 − c}`.
fn mirror_weight(c: f64, t: f64, h: f64) -> f64 {
    let term = |r: f64| {
        if h > 0.0 {
            kernel_cdf((t - r) / h) - kernel_cdf(-r / h)
        } else {
            indicator(r <= t) - indicator(r <= 0.0)
        }
    };
    term(-c) + term(c) + term(2.0 - c)
}

pub fn estimate_e(ps: &PseudoSample, u: f64, v: f64) -> f64 {
    Estimator::new(ps, EstimatorKind::E, 0.0).unwrap().eval(u, v)
}

pub fn estimate_ll(ps: &PseudoSample, h: f64, u: f64, v: f64) -> Result<f64> {
    Ok(Estimator::new(ps, EstimatorKind::LL, h)?.eval(u, v))
}

pub fn estimate_lls(ps: &PseudoSample, h: f64, u: f64, v: f64) -> Result<f64> {
    Ok(Estimator::new(ps, EstimatorKind::LLS, h)?.eval(u, v))
}

pub fn estimate_mr(ps: &PseudoSample, h: f64, u: f64, v: f64) -> Result<f64> {
    Ok(Estimator::new(ps, EstimatorKind::MR, h)?.eval(u, v))
}

pub fn estimate_mrs(ps: &PseudoSample, h: f64, u: f64, v: f64) -> Result<f64> {
    Ok(Estimator::new(ps, EstimatorKind::MRS, h)?.eval(u, v))
}

pub fn estimate_t(ps: &PseudoSample, h: f64, u: f64, v: f64) -> Result<f64> {
    Ok(Estimator::new(ps, EstimatorKind::T, h)?.eval(u, v))
}

/// Grid evaluation with a fixed bandwidth.
pub fn evaluate_grid(
    ps: &PseudoSample,
    kind: EstimatorKind,
    h: f64,
    grid: &EvalGrid,
) -> Result<Vec<Vec<f64>>> {
    Ok(Estimator::new(ps, kind, h)?.eval_grid(grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{sample, theta_from_tau, Family};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const KERNEL_KINDS: [EstimatorKind; 5] = [
        EstimatorKind::LL,
        EstimatorKind::LLS,
        EstimatorKind::MR,
        EstimatorKind::MRS,
        EstimatorKind::T,
    ];

    fn single() -> PseudoSample {
        PseudoSample::from_points(vec![0.5], vec![0.5], PseudoVariant::Shifted).unwrap()
    }

    fn two() -> PseudoSample {
        PseudoSample::from_points(vec![0.25, 0.75], vec![0.25, 0.75], PseudoVariant::Shifted)
            .unwrap()
    }

    fn clayton_ps(n: usize, seed: u64) -> PseudoSample {
        let spec = theta_from_tau(Family::Clayton, 0.5).unwrap();
        let s = sample(&spec, n, &mut ChaCha8Rng::seed_from_u64(seed));
        pseudo_obs(&s, PseudoVariant::Shifted).unwrap()
    }

    #[test]
    fn pseudo_variants() {
        let s = Sample::from_pairs(&[(10.0, 3.0), (20.0, 1.0), (30.0, 2.0)]).unwrap();
        let ps = pseudo_obs(&s, PseudoVariant::Shifted).unwrap();
        assert_eq!(ps.u(), &[0.25, 0.5, 0.75]);
        assert_eq!(ps.v(), &[0.75, 0.25, 0.5]);
        let pc = pseudo_obs(&s, PseudoVariant::Centered).unwrap();
        assert_eq!(pc.u(), &[1.0 / 6.0, 3.0 / 6.0, 5.0 / 6.0]);
        let one = Sample::from_pairs(&[(1.0, 1.0)]).unwrap();
        assert!(matches!(
            pseudo_obs(&one, PseudoVariant::Shifted),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn ties_get_average_ranks() {
        let s = Sample::from_pairs(&[(1.0, 1.0), (2.0, 2.0), (2.0, 3.0), (3.0, 4.0)]).unwrap();
        let ps = pseudo_obs(&s, PseudoVariant::Shifted).unwrap();
        assert_eq!(ps.u(), &[0.2, 0.5, 0.5, 0.8]);
    }

    #[test]
    fn empirical_copula_counts() {
        let ps = two();
        assert_eq!(estimate_e(&ps, 1.0, 1.0), 1.0);
        assert_eq!(estimate_e(&ps, 0.0, 0.0), 0.0);
        assert_eq!(estimate_e(&ps, 0.5, 0.5), 0.5);
        let g = evaluate_grid(&ps, EstimatorKind::E, 0.0, &EvalGrid::new(3).unwrap()).unwrap();
        assert_eq!(g[0], vec![0.0; 3]);
        assert!(g.iter().all(|row| row[0] == 0.0));
        assert_eq!(g[2][2], 1.0);
    }

    #[test]
    fn single_point_centre_value() {
        let ps = single();
        for kind in KERNEL_KINDS {
            let e = Estimator::new(&ps, kind, 0.1).unwrap();
            assert!((e.eval(0.5, 0.5) - 0.25).abs() < 1e-15, "{kind}");
        }
    }

    #[test]
    fn corners() {
        let ps = clayton_ps(60, 5);
        for kind in [EstimatorKind::E, EstimatorKind::MR, EstimatorKind::MRS, EstimatorKind::T] {
            let e = Estimator::new(&ps, kind, 0.2).unwrap();
            assert_eq!(e.eval(0.0, 0.0), 0.0, "{kind}");
            assert_eq!(e.eval(0.0, 1.0), 0.0, "{kind}");
            assert_eq!(e.eval(1.0, 0.0), 0.0, "{kind}");
            assert!((e.eval(1.0, 1.0) - 1.0).abs() < 1e-12, "{kind}");
        }
        let lls = Estimator::new(&ps, EstimatorKind::LLS, 0.2).unwrap();
        assert_eq!(lls.eval(0.0, 0.7), 0.0);
        assert_eq!(lls.eval(1.0, 1.0), 1.0);
        // u = 1 leaves the smoothed margin in v
        for &v in &[0.1, 0.5, 0.9] {
            let hb = shrink(v) * 0.2;
            let kl = LocalLinear::new(v, hb).unwrap();
            let margin = ps.v().iter().map(|&w| kl.cdf((v - w) / hb)).sum::<f64>() / ps.len() as f64;
            assert!((lls.eval(1.0, v) - margin).abs() < 1e-15);
        }
    }

    #[test]
    fn mirror_edges_are_exactly_zero() {
        let ps = clayton_ps(50, 9);
        let grid = EvalGrid::new(21).unwrap();
        for kind in [EstimatorKind::MR, EstimatorKind::MRS] {
            for h in [1e-3, 0.05, 0.25] {
                let g = evaluate_grid(&ps, kind, h, &grid).unwrap();
                assert!(g[0].iter().all(|&x| x == 0.0));
                assert!(g.iter().all(|row| row[0] == 0.0));
            }
        }
    }

    #[test]
    fn tiny_bandwidth_reproduces_empirical_copula() {
        let ps = clayton_ps(150, 11);
        let grid = EvalGrid::default();
        let e = evaluate_grid(&ps, EstimatorKind::E, 0.0, &grid).unwrap();
        let p = grid.points();
        let off_atom = |t: f64, data: &[f64]| data.iter().all(|&c| (t - c).abs() > 1e-6);
        for kind in KERNEL_KINDS {
            let g = evaluate_grid(&ps, kind, 1e-9, &grid).unwrap();
            for j in 0..p.len() {
                if !off_atom(p[j], ps.u()) {
                    continue;
                }
                for k in 0..p.len() {
                    if off_atom(p[k], ps.v()) {
                        assert!((g[j][k] - e[j][k]).abs() < 1e-9, "{kind} {j} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn grid_matches_pointwise_bit_for_bit() {
        let ps = clayton_ps(20, 13);
        let grid = EvalGrid::new(11).unwrap();
        for kind in EstimatorKind::ALL {
            let e = Estimator::new(&ps, kind, 0.15).unwrap();
            let g = e.eval_grid(&grid);
            for (j, &u) in grid.points().iter().enumerate() {
                for (k, &v) in grid.points().iter().enumerate() {
                    assert_eq!(g[j][k].to_bits(), e.eval(u, v).to_bits(), "{kind}");
                }
            }
        }
    }

    #[test]
    fn exchangeable_sample_gives_symmetric_estimate() {
        let base = clayton_ps(30, 17);
        let mut u = base.u().to_vec();
        let mut v = base.v().to_vec();
        u.extend_from_slice(base.v());
        v.extend_from_slice(base.u());
        let ps = PseudoSample::from_points(u, v, PseudoVariant::Shifted).unwrap();
        let grid = EvalGrid::new(13).unwrap();
        for kind in EstimatorKind::ALL {
            let g = evaluate_grid(&ps, kind, 0.1, &grid).unwrap();
            for j in 0..grid.len() {
                for k in 0..grid.len() {
                    assert!((g[j][k] - g[k][j]).abs() < 1e-12, "{kind}");
                }
            }
        }
    }

    #[test]
    fn monotone_along_rows_and_columns() {
        let ps = clayton_ps(80, 19);
        let grid = EvalGrid::new(41).unwrap();
        for kind in [EstimatorKind::E, EstimatorKind::MR, EstimatorKind::MRS, EstimatorKind::T] {
            let g = evaluate_grid(&ps, kind, 0.1, &grid).unwrap();
            for j in 0..grid.len() {
                for k in 1..grid.len() {
                    assert!(g[j][k] >= g[j][k - 1] - 1e-10, "{kind}");
                    assert!(g[k][j] >= g[k - 1][j] - 1e-10, "{kind}");
                }
            }
        }
    }

    #[test]
    fn range_on_simulated_samples() {
        let grid = EvalGrid::default();
        for seed in 0..3 {
            let ps = clayton_ps(50, 100 + seed);
            for kind in EstimatorKind::ALL {
                let g = evaluate_grid(&ps, kind, 0.2, &grid).unwrap();
                let (lo, hi) = match kind {
                    EstimatorKind::LL | EstimatorKind::LLS => (-0.05, 1.05),
                    _ => (-1e-12, 1.0 + 1e-12),
                };
                assert!(g.iter().flatten().all(|&x| x >= lo && x <= hi), "{kind}");
            }
        }
    }

    #[test]
    fn bandwidth_domain() {
        let ps = single();
        assert!(Estimator::new(&ps, EstimatorKind::LL, 0.3).is_err());
        assert!(Estimator::new(&ps, EstimatorKind::LLS, 0.3).is_ok());
        assert!(Estimator::new(&ps, EstimatorKind::MRS, 0.36).is_err());
        assert!(Estimator::new(&ps, EstimatorKind::MR, 0.0).is_err());
        assert!(Estimator::new(&ps, EstimatorKind::T, 0.6).is_ok());
        assert!(Estimator::new(&ps, EstimatorKind::E, f64::NAN).is_ok());
    }

    #[test]
    fn names_round_trip() {
        for kind in EstimatorKind::ALL {
            assert_eq!(kind.name().parse::<EstimatorKind>().unwrap(), kind);
        }
        assert_eq!("LLS".parse::<EstimatorKind>().unwrap(), EstimatorKind::LLS);
        assert!("xx".parse::<EstimatorKind>().is_err());
    }

    proptest! {
        #[test]
        fn rank_invariance(
            pts in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 5..30),
            kind_idx in 0usize..6,
        ) {
            let s = Sample::from_pairs(&pts).unwrap();
            let t = Sample::new(
                s.x().iter().map(|&x| x.exp()).collect(),
                s.y().iter().map(|&y| 3.0 * y + 1.0).collect(),
            ).unwrap();
            let a = pseudo_obs(&s, PseudoVariant::Shifted).unwrap();
            let b = pseudo_obs(&t, PseudoVariant::Shifted).unwrap();
            prop_assert_eq!(&a, &b);
            let kind = EstimatorKind::ALL[kind_idx];
            let ea = Estimator::new(&a, kind, 0.1).unwrap();
            let eb = Estimator::new(&b, kind, 0.1).unwrap();
            prop_assert_eq!(ea.eval(0.3, 0.6), eb.eval(0.3, 0.6));
        }

        #[test]
        fn mirror_left_edge_is_zero(
            pts in prop::collection::vec((0.001f64..0.999, 0.001f64..0.999), 1..20),
            h in 1e-6f64..0.25,
            t in 0.0f64..1.0,
        ) {
            let (u, v): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            let ps = PseudoSample::from_points(u, v, PseudoVariant::Shifted).unwrap();
            prop_assert_eq!(estimate_mr(&ps, h, 0.0, t).unwrap(), 0.0);
            prop_assert_eq!(estimate_mr(&ps, h, t, 0.0).unwrap(), 0.0);
            prop_assert_eq!(estimate_mrs(&ps, h, 0.0, t).unwrap(), 0.0);
        }
    }
}
