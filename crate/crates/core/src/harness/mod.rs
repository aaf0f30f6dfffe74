//! Monte Carlo experiments, CSV ingestion and result output.

mod experiments;
mod ingest;
pub mod seeds;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::families::Family;
use crate::gof::StatKind;

pub use experiments::{run, run_estimator_compare, run_fixed_h_sweep, run_gof_size_power, summarize};
pub use ingest::{ingest_csv, parse_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    EstimatorCompare,
    FixedHSweep,
    GofSizePower,
}

impl ExperimentKind {
    fn id(self) -> u64 {
        match self {
            ExperimentKind::EstimatorCompare => 1,
            ExperimentKind::FixedHSweep => 2,
            ExperimentKind::GofSizePower => 3,
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compare" => Ok(ExperimentKind::EstimatorCompare),
            "sweep" => Ok(ExperimentKind::FixedHSweep),
            "gof-table" => Ok(ExperimentKind::GofSizePower),
            other => Err(Error::Input(format!("unknown experiment '{other}'"))),
        }
    }
}

/// `count` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Default bandwidth grid for the fixed-bandwidth sweep.
pub fn default_h_grid() -> Vec<f64> {
    log_grid(0.005, 0.25, 20)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub kind: ExperimentKind,
    pub true_family: Family,
    pub tau: f64,
    pub null_family: Option<Family>,
    pub n: usize,
    pub reps: usize,
    pub b: usize,
    pub estimators: Vec<EstimatorKind>,
    pub stats: Vec<StatKind>,
    pub seed: u64,
    pub h_grid: Vec<f64>,
    /// Level of the goodness-of-fit tests.
    pub alpha: f64,
}

impl ExperimentPlan {
    pub fn new(kind: ExperimentKind, true_family: Family, tau: f64, seed: u64) -> Self {
        let (estimators, stats) = match kind {
            ExperimentKind::EstimatorCompare => (EstimatorKind::ALL.to_vec(), vec![StatKind::Ks, StatKind::Cm]),
            ExperimentKind::FixedHSweep => (vec![EstimatorKind::LL], vec![StatKind::Ks, StatKind::Cm]),
            ExperimentKind::GofSizePower => (vec![EstimatorKind::E], vec![StatKind::Cm]),
        };
        ExperimentPlan {
            kind,
            true_family,
            tau,
            null_family: None,
            n: 150,
            reps: 200,
            b: 199,
            estimators,
            stats,
            seed,
            h_grid: default_h_grid(),
            alpha: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return Err(Error::Input("reps must be at least 1".into()));
        }
        if self.n < 10 {
            return Err(Error::InsufficientData { needed: 10, got: self.n });
        }
        crate::families::theta_from_tau(self.true_family, self.tau)?;
        if self.kind == ExperimentKind::GofSizePower {
            let null = self
                .null_family
                .ok_or_else(|| Error::Input("a null family is required".into()))?;
            crate::families::theta_from_tau(null, self.tau)?;
            if self.b < 1 {
                return Err(Error::Input("B must be at least 1".into()));
            }
        }
        if self.kind == ExperimentKind::FixedHSweep {
            let cap = self
                .estimators
                .iter()
                .map(|k| k.max_bandwidth())
                .fold(f64::INFINITY, f64::min);
            if let Some(&h) = self.h_grid.iter().find(|&&h| !(h > 0.0 && h <= cap)) {
                return Err(Error::Bandwidth(h));
            }
        }
        Ok(())
    }
}

/// Quantity recorded in a result row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Ks,
    Cm,
    Q,
    SelectedH,
    PValue,
}

impl From<StatKind> for Measure {
    fn from(s: StatKind) -> Self {
        match s {
            StatKind::Ks => Measure::Ks,
            StatKind::Cm => Measure::Cm,
            StatKind::Q => Measure::Q,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Ks => "ks",
            Measure::Cm => "cm",
            Measure::Q => "q",
            Measure::SelectedH => "selected_h",
            Measure::PValue => "p_value",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Rep,
    Summary,
}

/// One output row: either a single repetition or a summary over repetitions.
///
/// Columns are fixed; unused fields are left empty in the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub record: RecordKind,
    pub experiment: ExperimentKind,
    pub true_family: Family,
    pub tau: f64,
    pub null_family: Option<Family>,
    pub n: usize,
    pub estimator: EstimatorKind,
    pub measure: Measure,
    /// Statistic behind a p-value row.
    pub statistic: Option<StatKind>,
    /// Fixed bandwidth of a sweep point; empty when selected per sample.
    pub h: Option<f64>,
    pub rep: Option<usize>,
    pub value: Option<f64>,
    pub count: Option<usize>,
    pub q1: Option<f64>,
    pub median: Option<f64>,
    pub q3: Option<f64>,
    pub mean: Option<f64>,
    pub rejection_rate: Option<f64>,
}

/// Type-7 sample quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0);
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Writes rows as CSV with a header; floats use shortest round-trip form.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Input(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&x, 0.5), 2.5);
        assert_eq!(quantile_sorted(&x, 0.25), 1.75);
        assert_eq!(quantile_sorted(&x, 0.75), 3.25);
        assert_eq!(quantile_sorted(&[5.0], 0.25), 5.0);
    }

    #[test]
    fn default_grid() {
        let g = default_h_grid();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.005);
        assert_eq!(g[19], 0.25);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!((g[1] / g[0] - g[19] / g[18]).abs() < 1e-12);
    }

    #[test]
    fn plan_validation() {
        let mut p = ExperimentPlan::new(ExperimentKind::GofSizePower, Family::Frank, 0.5, 1);
        assert!(p.validate().is_err());
        p.null_family = Some(Family::Clayton);
        assert!(p.validate().is_ok());
        p.n = 5;
        assert!(p.validate().is_err());
        let mut s = ExperimentPlan::new(ExperimentKind::FixedHSweep, Family::Frank, 0.25, 1);
        s.h_grid = vec![0.1, 0.3];
        assert!(matches!(s.validate(), Err(Error::Bandwidth(_))));
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let row = ResultRow {
            record: RecordKind::Rep,
            experiment: ExperimentKind::EstimatorCompare,
            true_family: Family::Clayton,
            tau: 0.75,
            null_family: None,
            n: 150,
            estimator: EstimatorKind::LLS,
            measure: Measure::Cm,
            statistic: None,
            h: Some(0.1),
            rep: Some(3),
            value: Some(std::f64::consts::PI / 7.0),
            count: None,
            q1: None,
            median: None,
            q3: None,
            mean: None,
            rejection_rate: None,
        };
        let mut buf = Vec::new();
        write_csv(&[row.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("record,experiment,true_family,tau,null_family,n,estimator,measure,statistic,h,rep,value"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), vec![row]);
    }
}
