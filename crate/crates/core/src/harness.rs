//! Monte Carlo experiment runner.
//!
//! An experiment repeats: sample a cloud from a manifold (to a pair budget
//! or a point budget), run an estimator, score success as "rounded estimate
//! equals the intrinsic dimension". Trials are independent and keyed by
//! stream id, so reports are identical for any worker count.

use crate::baselines::{anova_statistic, collect_angles, nearest_beta_dimension};
use crate::error::{Error, Result};
use crate::estimator::{count_pairs, dim_corr_from_counts, dim_gp, DimEstimate, PointCloud};
use crate::geometry::ScalePair;
use crate::samplers::{sample, sample_until_pairs, ManifoldSpec, Seed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;

/// How each trial's cloud size is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "target", rename_all = "snake_case")]
pub enum Mode {
    /// Sample until the cloud holds this many pairs at eps1.
    FixedPairs(u64),
    /// Sample exactly this many points.
    FixedPoints(u64),
}

/// Which estimator scores the trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// Two-scale pair-count slope.
    Corr,
    /// One-scale correlation-integral slope at eps1.
    Gp,
    /// Angle statistic against the β table, candidates 1..=12.
    Anova,
}

/// Candidate range the angle estimator searches.
const ANOVA_RANGE: std::ops::RangeInclusive<u32> = 1..=12;

/// Per-trial sampling cap (points) unless overridden.
pub const DEFAULT_CAP: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub manifold: ManifoldSpec,
    pub mode: Mode,
    pub scales: ScalePair,
    pub estimator: EstimatorKind,
    pub trials: u32,
    pub master_seed: u64,
    /// Per-trial point cap for pair-target sampling.
    pub cap: u64,
}

impl ExperimentConfig {
    pub fn new(
        manifold: ManifoldSpec,
        mode: Mode,
        scales: ScalePair,
        estimator: EstimatorKind,
        master_seed: u64,
    ) -> Self {
        Self { manifold, mode, scales, estimator, trials: 100, master_seed, cap: DEFAULT_CAP }
    }

    fn validate(&self) -> Result<()> {
        self.manifold.validate()?;
        if self.trials == 0 {
            return Err(Error::Domain("trials must be >= 1".into()));
        }
        if let Mode::FixedPairs(0) | Mode::FixedPoints(0) = self.mode {
            return Err(Error::Domain("mode target must be >= 1".into()));
        }
        Ok(())
    }
}

/// One trial's outcome. `raw_statistic` is the raw slope for the pair
/// estimators and the angle statistic B for the angle estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub stream_id: u64,
    /// False when the sampling cap was hit; such trials carry no estimate
    /// and are excluded from the success-rate denominator.
    pub valid: bool,
    pub n_points: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs_eps1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs_eps2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_angles: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<i64>,
    pub success: bool,
}

impl TrialRecord {
    fn invalid(stream_id: u64, n_points: u64) -> Self {
        TrialRecord {
            stream_id,
            valid: false,
            n_points,
            pairs_eps1: None,
            pairs_eps2: None,
            n_angles: None,
            raw_statistic: None,
            estimate: None,
            success: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub successes: u32,
    pub valid_trials: u32,
    pub invalid_trials: u32,
    /// successes / valid_trials.
    pub success_rate: f64,
    pub wall_time_ms: u64,
}

fn score(estimate: Option<i64>, d_true: u32) -> bool {
    estimate == Some(d_true as i64)
}

/// Runs estimator `kind` on a sampled cloud and fills the record fields.
fn estimate_cloud(
    cloud: &PointCloud,
    scales: ScalePair,
    kind: EstimatorKind,
    d_true: u32,
    record: &mut TrialRecord,
) -> Result<()> {
    match kind {
        EstimatorKind::Corr => {
            let c1 = count_pairs(cloud, scales.eps1)?.count;
            let c2 = count_pairs(cloud, scales.eps2)?.count;
            record.pairs_eps1 = Some(c1);
            record.pairs_eps2 = Some(c2);
            match dim_corr_from_counts(c1, c2, scales) {
                DimEstimate::Defined { raw_slope, rounded } => {
                    record.raw_statistic = Some(raw_slope);
                    record.estimate = Some(rounded);
                }
                DimEstimate::GreaterThan { limit_slope, .. } => {
                    record.raw_statistic = Some(limit_slope);
                }
                DimEstimate::Undefined => {}
            }
        }
        EstimatorKind::Gp => {
            record.pairs_eps1 = Some(count_pairs(cloud, scales.eps1)?.count);
            match dim_gp(cloud, scales.eps1) {
                Ok(slope) => {
                    record.raw_statistic = Some(slope);
                    record.estimate = Some((slope + 0.5).floor() as i64);
                }
                Err(Error::Undefined(_)) => {}
                Err(e) => return Err(e),
            }
        }
        EstimatorKind::Anova => {
            record.pairs_eps1 = Some(count_pairs(cloud, scales.eps1)?.count);
            match collect_angles(cloud, scales.eps1) {
                Ok(sample) => {
                    let b = anova_statistic(&sample);
                    record.n_angles = Some(sample.angles.len() as u64);
                    record.raw_statistic = Some(b);
                    record.estimate = Some(nearest_beta_dimension(b, ANOVA_RANGE)? as i64);
                }
                Err(Error::InsufficientData(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    record.success = score(record.estimate, d_true);
    Ok(())
}

/// One seeded trial. A trial that exhausts the sampling cap comes back
/// marked invalid rather than as an error.
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> Result<TrialRecord> {
    let seed = Seed::new(config.master_seed, trial_index);
    let cloud = match config.mode {
        Mode::FixedPairs(n_pairs) => {
            match sample_until_pairs(&config.manifold, config.scales.eps1, n_pairs, seed, config.cap)
            {
                Ok(cloud) => cloud,
                Err(Error::CapExceeded(_)) => {
                    return Ok(TrialRecord::invalid(trial_index, config.cap));
                }
                Err(e) => return Err(e),
            }
        }
        Mode::FixedPoints(n) => sample(&config.manifold, n as usize, seed)?,
    };
    let mut record = TrialRecord {
        stream_id: trial_index,
        valid: true,
        n_points: cloud.n() as u64,
        pairs_eps1: None,
        pairs_eps2: None,
        n_angles: None,
        raw_statistic: None,
        estimate: None,
        success: false,
    };
    estimate_cloud(
        &cloud,
        config.scales,
        config.estimator,
        config.manifold.intrinsic_dim(),
        &mut record,
    )?;
    Ok(record)
}

/// All trials in parallel. Fails hard when more than 5% of trials hit the
/// sampling cap; below that they are reported and excluded from the rate.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let records: Vec<TrialRecord> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<Vec<_>>>()?;
    let invalid = records.iter().filter(|r| !r.valid).count() as u32;
    if invalid as u64 * 20 > config.trials as u64 {
        return Err(Error::CapExceeded(format!(
            "{invalid} of {} trials hit the sampling cap of {} points",
            config.trials, config.cap
        )));
    }
    let valid = config.trials - invalid;
    let successes = records.iter().filter(|r| r.success).count() as u32;
    Ok(ExperimentReport {
        config: config.clone(),
        records,
        successes,
        valid_trials: valid,
        invalid_trials: invalid,
        success_rate: successes as f64 / valid as f64,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

/// One line per trial, then one summary line (the report without records).
pub fn write_ndjson<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    #[derive(Serialize)]
    struct TrialLine<'a> {
        kind: &'static str,
        #[serde(flatten)]
        record: &'a TrialRecord,
    }
    #[derive(Serialize)]
    struct SummaryLine<'a> {
        kind: &'static str,
        config: &'a ExperimentConfig,
        successes: u32,
        valid_trials: u32,
        invalid_trials: u32,
        success_rate: f64,
        wall_time_ms: u64,
    }
    let io = |e: std::io::Error| Error::Domain(format!("report write failed: {e}"));
    let js = |e: serde_json::Error| Error::Domain(format!("report encode failed: {e}"));
    for record in &report.records {
        let line = serde_json::to_string(&TrialLine { kind: "trial", record }).map_err(js)?;
        writeln!(out, "{line}").map_err(io)?;
    }
    let summary = serde_json::to_string(&SummaryLine {
        kind: "summary",
        config: &report.config,
        successes: report.successes,
        valid_trials: report.valid_trials,
        invalid_trials: report.invalid_trials,
        success_rate: report.success_rate,
        wall_time_ms: report.wall_time_ms,
    })
    .map_err(js)?;
    writeln!(out, "{summary}").map_err(io)?;
    Ok(())
}

/// Paired outcome of the two-scale and angle estimators on one cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub stream_id: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr_estimate: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anova_estimate: Option<i64>,
    pub corr_success: bool,
    pub anova_success: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub manifold: ManifoldSpec,
    pub n_points: u64,
    pub scales: ScalePair,
    pub trials: u32,
    pub master_seed: u64,
    pub corr_rate: f64,
    pub anova_rate: f64,
    pub records: Vec<CompareRecord>,
}

/// Runs both estimators on the same sampled clouds, one cloud per trial.
pub fn compare_estimators(
    manifold: &ManifoldSpec,
    n_points: u64,
    scales: ScalePair,
    trials: u32,
    master_seed: u64,
) -> Result<ComparisonReport> {
    manifold.validate()?;
    if trials == 0 || n_points == 0 {
        return Err(Error::Domain("trials and n_points must be >= 1".into()));
    }
    let d_true = manifold.intrinsic_dim();
    let records: Vec<CompareRecord> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<CompareRecord> {
            let cloud = sample(manifold, n_points as usize, Seed::new(master_seed, t))?;
            let c1 = count_pairs(&cloud, scales.eps1)?.count;
            let c2 = count_pairs(&cloud, scales.eps2)?.count;
            let corr_estimate = dim_corr_from_counts(c1, c2, scales).rounded();
            let anova_estimate = match collect_angles(&cloud, scales.eps1) {
                Ok(sample) => {
                    Some(nearest_beta_dimension(anova_statistic(&sample), ANOVA_RANGE)? as i64)
                }
                Err(Error::InsufficientData(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(CompareRecord {
                stream_id: t,
                corr_estimate,
                anova_estimate,
                corr_success: score(corr_estimate, d_true),
                anova_success: score(anova_estimate, d_true),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let corr = records.iter().filter(|r| r.corr_success).count();
    let anova = records.iter().filter(|r| r.anova_success).count();
    Ok(ComparisonReport {
        manifold: manifold.clone(),
        n_points,
        scales,
        trials,
        master_seed,
        corr_rate: corr as f64 / trials as f64,
        anova_rate: anova as f64 / trials as f64,
        records,
    })
}
