use std::collections::HashMap;

use log::warn;
use rayon::prelude::*;

use super::{quantile_sorted, seeds, ExperimentKind, ExperimentPlan, Measure, RecordKind, ResultRow};
use crate::bandwidth;
use crate::error::{Error, Result};
use crate::estimators::{pseudo_obs, Estimator, EstimatorConfig, EstimatorKind, EvalGrid, PseudoSample, PseudoVariant};
use crate::families::{sample, theta_from_tau, CopulaSpec};
use crate::gof::{bootstrap_gof_multi, cm_distance, copula_grid, mean_sq_distance, sup_distance, StatKind};

/// Offset separating bootstrap seeds from data seeds.
const BOOT_OFFSET: u64 = 100;

pub fn run(plan: &ExperimentPlan) -> Result<Vec<ResultRow>> {
    match plan.kind {
        ExperimentKind::EstimatorCompare => run_estimator_compare(plan),
        ExperimentKind::FixedHSweep => run_fixed_h_sweep(plan),
        ExperimentKind::GofSizePower => run_gof_size_power(plan),
    }
}

fn rep_row(plan: &ExperimentPlan, rep: usize, estimator: EstimatorKind, measure: Measure, h: Option<f64>, value: Option<f64>) -> ResultRow {
    ResultRow {
        record: RecordKind::Rep,
        experiment: plan.kind,
        true_family: plan.true_family,
        tau: plan.tau,
        null_family: plan.null_family,
        n: plan.n,
        estimator,
        measure,
        statistic: None,
        h,
        rep: Some(rep),
        value,
        count: None,
        q1: None,
        median: None,
        q3: None,
        mean: None,
        rejection_rate: None,
    }
}

fn check_kind(plan: &ExperimentPlan, kind: ExperimentKind) -> Result<()> {
    if plan.kind != kind {
        return Err(Error::Input(format!("plan is {:?}, expected {kind:?}", plan.kind)));
    }
    plan.validate()
}

/// Plug-in bandwidth, falling back to `n^(−1/3)` when the rule is undefined.
fn auto_h(ps: &PseudoSample, kind: EstimatorKind) -> f64 {
    bandwidth::resolve(ps, &EstimatorConfig::auto(kind)).unwrap_or_else(|e| {
        warn!("bandwidth rule failed ({e}); using n^(-1/3)");
        (ps.len() as f64).powf(-1.0 / 3.0).min(crate::kernels::H_MAX)
    })
}

struct Truth {
    spec: CopulaSpec,
    grid: EvalGrid,
    values: Option<Vec<Vec<f64>>>,
}

impl Truth {
    fn new(plan: &ExperimentPlan) -> Result<Self> {
        let spec = theta_from_tau(plan.true_family, plan.tau)?;
        let grid = EvalGrid::default();
        let values = plan
            .stats
            .iter()
            .any(|&s| s != StatKind::Cm)
            .then(|| copula_grid(&spec, &grid));
        Ok(Truth { spec, grid, values })
    }

    fn measures(&self, est: &Estimator, stats: &[StatKind]) -> Vec<(Measure, f64)> {
        let n = est.pseudo_sample().len() as f64;
        let grid_est = self.values.as_ref().map(|_| est.eval_grid(&self.grid));
        stats
            .iter()
            .map(|&s| {
                let value = match s {
                    StatKind::Ks => sup_distance(grid_est.as_ref().unwrap(), self.values.as_ref().unwrap()),
                    StatKind::Cm => cm_distance(est, &self.spec),
                    StatKind::Q => n * mean_sq_distance(grid_est.as_ref().unwrap(), self.values.as_ref().unwrap()),
                };
                (Measure::from(s), value)
            })
            .collect()
    }
}

fn draw(plan: &ExperimentPlan, truth: &Truth, rep: usize) -> Result<PseudoSample> {
    let mut rng = seeds::stream(plan.seed, plan.kind.id(), rep as u64);
    let data = sample(&truth.spec, plan.n, &mut rng);
    pseudo_obs(&data, PseudoVariant::Shifted)
}

fn finish(plan: &ExperimentPlan, per_rep: Vec<Vec<ResultRow>>) -> Vec<ResultRow> {
    let mut rows: Vec<ResultRow> = per_rep.into_iter().flatten().collect();
    let summary = summarize(&rows, plan.alpha);
    rows.extend(summary);
    rows
}

/// Performance of each estimator, with plug-in bandwidths, against the true
/// copula.
pub fn run_estimator_compare(plan: &ExperimentPlan) -> Result<Vec<ResultRow>> {
    check_kind(plan, ExperimentKind::EstimatorCompare)?;
    let truth = Truth::new(plan)?;
    let per_rep = (0..plan.reps)
        .into_par_iter()
        .map(|rep| -> Result<Vec<ResultRow>> {
            let ps = draw(plan, &truth, rep)?;
            let mut rows = Vec::new();
            for &kind in &plan.estimators {
                let h = if kind.uses_bandwidth() { auto_h(&ps, kind) } else { 0.0 };
                let est = Estimator::new(&ps, kind, h)?;
                for (m, v) in truth.measures(&est, &plan.stats) {
                    rows.push(rep_row(plan, rep, kind, m, None, Some(v)));
                }
                if kind.uses_bandwidth() {
                    rows.push(rep_row(plan, rep, kind, Measure::SelectedH, None, Some(h)));
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(plan, per_rep))
}

/// Performance over a grid of fixed bandwidths, with the empirical copula as
/// baseline and the plug-in selections as a reference.
pub fn run_fixed_h_sweep(plan: &ExperimentPlan) -> Result<Vec<ResultRow>> {
    check_kind(plan, ExperimentKind::FixedHSweep)?;
    let truth = Truth::new(plan)?;
    let per_rep = (0..plan.reps)
        .into_par_iter()
        .map(|rep| -> Result<Vec<ResultRow>> {
            let ps = draw(plan, &truth, rep)?;
            let mut rows = Vec::new();
            let e = Estimator::new(&ps, EstimatorKind::E, 0.0)?;
            for (m, v) in truth.measures(&e, &plan.stats) {
                rows.push(rep_row(plan, rep, EstimatorKind::E, m, None, Some(v)));
            }
            for &kind in plan.estimators.iter().filter(|k| k.uses_bandwidth()) {
                for &h in &plan.h_grid {
                    let est = Estimator::new(&ps, kind, h)?;
                    for (m, v) in truth.measures(&est, &plan.stats) {
                        rows.push(rep_row(plan, rep, kind, m, Some(h), Some(v)));
                    }
                }
                let selected = auto_h(&ps, kind);
                rows.push(rep_row(plan, rep, kind, Measure::SelectedH, None, Some(selected)));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(plan, per_rep))
}

/// Size or power of the bootstrap tests. A repetition whose data cannot be
/// fitted by the null family (for example negative `τ̂` under Clayton)
/// counts as a rejection and has an empty p-value.
pub fn run_gof_size_power(plan: &ExperimentPlan) -> Result<Vec<ResultRow>> {
    check_kind(plan, ExperimentKind::GofSizePower)?;
    let truth = theta_from_tau(plan.true_family, plan.tau)?;
    let null = plan.null_family.expect("validated");
    let tests: Vec<(EstimatorConfig, StatKind)> = plan
        .estimators
        .iter()
        .flat_map(|&k| plan.stats.iter().map(move |&s| (EstimatorConfig::auto(k), s)))
        .collect();
    let per_rep = (0..plan.reps)
        .into_par_iter()
        .map(|rep| -> Result<Vec<ResultRow>> {
            let mut rng = seeds::stream(plan.seed, plan.kind.id(), rep as u64);
            let data = sample(&truth, plan.n, &mut rng);
            let boot_seed = seeds::derive_seed(plan.seed, plan.kind.id() + BOOT_OFFSET, rep as u64);
            let p_values: Vec<Option<f64>> = match bootstrap_gof_multi(&data, null, &tests, plan.b, boot_seed) {
                Ok(reports) => reports.iter().map(|r| Some(r.p_value)).collect(),
                Err(e @ Error::InversionRange { .. }) => {
                    warn!("repetition {rep}: {e}; counted as a rejection");
                    vec![None; tests.len()]
                }
                Err(e) => return Err(e),
            };
            Ok(tests
                .iter()
                .zip(p_values)
                .map(|((cfg, stat), p)| ResultRow {
                    statistic: Some(*stat),
                    ..rep_row(plan, rep, cfg.kind, Measure::PValue, None, p)
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(plan, per_rep))
}

/// Summary rows for every group of repetition rows sharing all coordinates
/// except the repetition index, in order of first appearance.
pub fn summarize(rows: &[ResultRow], alpha: f64) -> Vec<ResultRow> {
    type Key = (ExperimentKind, EstimatorKind, Measure, Option<StatKind>, Option<u64>);
    let mut order: Vec<Key> = Vec::new();
    let mut groups: HashMap<Key, Vec<&ResultRow>> = HashMap::new();
    for row in rows.iter().filter(|r| r.record == RecordKind::Rep) {
        let key = (row.experiment, row.estimator, row.measure, row.statistic, row.h.map(f64::to_bits));
        groups
            .entry(key)
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(row);
    }
    order
        .iter()
        .map(|key| {
            let members = &groups[key];
            let first = members[0];
            let mut values: Vec<f64> = members.iter().filter_map(|r| r.value).collect();
            values.sort_by(f64::total_cmp);
            let (q1, median, q3, mean) = if values.is_empty() {
                (None, None, None, None)
            } else {
                (
                    Some(quantile_sorted(&values, 0.25)),
                    Some(quantile_sorted(&values, 0.5)),
                    Some(quantile_sorted(&values, 0.75)),
                    Some(values.iter().sum::<f64>() / values.len() as f64),
                )
            };
            let rejection_rate = (first.measure == Measure::PValue).then(|| {
                let rejected = members
                    .iter()
                    .filter(|r| r.value.is_none_or(|p| p <= alpha))
                    .count();
                rejected as f64 / members.len() as f64
            });
            ResultRow {
                record: RecordKind::Summary,
                rep: None,
                value: None,
                count: Some(members.len()),
                q1,
                median,
                q3,
                mean,
                rejection_rate,
                ..first.clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;

    fn small(kind: ExperimentKind) -> ExperimentPlan {
        let mut p = ExperimentPlan::new(kind, Family::Clayton, 0.5, 9);
        p.n = 40;
        p.reps = 5;
        p.b = 9;
        p.h_grid = vec![0.05, 0.2];
        p.null_family = Some(Family::Frank);
        p.stats = vec![StatKind::Ks, StatKind::Cm, StatKind::Q];
        p
    }

    fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
    }

    #[test]
    fn output_does_not_depend_on_thread_count() {
        for kind in [ExperimentKind::EstimatorCompare, ExperimentKind::FixedHSweep, ExperimentKind::GofSizePower] {
            let plan = small(kind);
            let a = in_pool(1, || run(&plan).unwrap());
            let b = in_pool(3, || run(&plan).unwrap());
            let (mut x, mut y) = (Vec::new(), Vec::new());
            super::super::write_csv(&a, &mut x).unwrap();
            super::super::write_csv(&b, &mut y).unwrap();
            assert_eq!(x, y, "{kind:?}");
        }
    }

    #[test]
    fn summaries_match_recomputation() {
        let rows = run(&small(ExperimentKind::FixedHSweep)).unwrap();
        let reps: Vec<&ResultRow> = rows.iter().filter(|r| r.record == RecordKind::Rep).collect();
        for s in rows.iter().filter(|r| r.record == RecordKind::Summary) {
            let mut v: Vec<f64> = reps
                .iter()
                .filter(|r| r.estimator == s.estimator && r.measure == s.measure && r.h == s.h)
                .filter_map(|r| r.value)
                .collect();
            assert_eq!(s.count, Some(v.len()));
            v.sort_by(f64::total_cmp);
            let mid = if v.len() % 2 == 1 { v[v.len() / 2] } else { 0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2]) };
            assert_eq!(s.median, Some(mid));
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            assert!((s.mean.unwrap() - mean).abs() <= 1e-15 * mean.abs());
        }
    }

    #[test]
    fn rejection_rate_counts_missing_p_values() {
        let row = |p: Option<f64>| ResultRow {
            statistic: Some(StatKind::Cm),
            ..rep_row(&small(ExperimentKind::GofSizePower), 0, EstimatorKind::E, Measure::PValue, None, p)
        };
        let rows = [row(Some(0.01)), row(None), row(Some(0.5)), row(Some(0.05))];
        let s = summarize(&rows, 0.05);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].rejection_rate, Some(0.75));
        assert_eq!(s[0].count, Some(4));
    }

    #[test]
    fn unattainable_null_tau_fails_validation() {
        let mut plan = small(ExperimentKind::GofSizePower);
        plan.true_family = Family::Normal;
        plan.tau = -0.5;
        plan.null_family = Some(Family::Clayton);
        plan.stats = vec![StatKind::Cm];
        assert!(matches!(run(&plan), Err(Error::InversionRange { .. })));
    }

    #[test]
    fn wrong_plan_kind_is_rejected() {
        assert!(run_estimator_compare(&small(ExperimentKind::FixedHSweep)).is_err());
    }
}
