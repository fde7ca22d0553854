//! Executes an experiment and collects summary records.
//!
//! Sweep points and seeds run in parallel. Each (point, seed) pair draws from
//! streams derived from the seed and the point's parameters only, so records
//! do not depend on the sweep's other points, the worker count or completion
//! order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::{ExperimentSpec, Mode, SweepPoint};
use crate::error::{Error, Result};
use crate::game::PeriodContext;
use crate::oracle::{
    noncooperative_reference, random_baseline, solve_stackelberg, FollowerSelector, StackelbergReport,
    DEFAULT_SWEEP_CAP, RANDOM_BASELINE_DRAWS,
};
use crate::rng::{derive_seed, substream, Stream};
use crate::sla::{run_all_periods, LearningConfig, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Proposed,
    BestNe,
    WorstNe,
    Random,
    Noncooperative,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Proposed,
        Algorithm::BestNe,
        Algorithm::WorstNe,
        Algorithm::Random,
        Algorithm::Noncooperative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Proposed => "proposed",
            Algorithm::BestNe => "best_ne",
            Algorithm::WorstNe => "worst_ne",
            Algorithm::Random => "random",
            Algorithm::Noncooperative => "noncooperative",
        }
    }
}

/// One row of `summary.csv`. Channels are one-based; per-period lists are
/// separated by `;` and UAV channels within a period by spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub mode: String,
    pub channels: usize,
    pub jammer_power: f64,
    pub uav_power: Option<f64>,
    pub seed: Option<u64>,
    pub algorithm: Algorithm,
    /// Total loss summed over periods.
    pub total_loss: Option<f64>,
    pub epochs: Option<usize>,
    pub slots: Option<usize>,
    pub converged: Option<bool>,
    pub jammer_channels: String,
    pub uav_channels: String,
    pub status: String,
}

impl SummaryRecord {
    fn blank(mode: Mode, point: &SweepPoint, seed: Option<u64>, algorithm: Algorithm) -> Self {
        Self {
            mode: mode.to_string(),
            channels: point.channels,
            jammer_power: point.jammer_power,
            uav_power: point.uav_power,
            seed,
            algorithm,
            total_loss: None,
            epochs: None,
            slots: None,
            converged: None,
            jammer_channels: String::new(),
            uav_channels: String::new(),
            status: "ok".into(),
        }
    }
}

fn format_jammer(channels: impl IntoIterator<Item = usize>) -> String {
    channels
        .into_iter()
        .map(|c| (c + 1).to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn format_uavs<'a>(periods: impl IntoIterator<Item = &'a [usize]>) -> String {
    periods
        .into_iter()
        .map(|ch| ch.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

/// Best- and worst-equilibrium leader solutions for every period of a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodOracle {
    pub period: usize,
    pub best: StackelbergReport,
    pub worst: StackelbergReport,
}

pub type PointOracle = std::result::Result<Vec<PeriodOracle>, String>;

/// Solves every period of the point. Enumeration-cap failures are returned
/// as `Err(message)`; any other failure aborts.
pub fn solve_point(point: &SweepPoint, cap: u64) -> Result<PointOracle> {
    let mut out = Vec::with_capacity(point.scenario.n_periods);
    for z in 0..point.scenario.n_periods {
        let ctx = PeriodContext::new(&point.scenario, z)?;
        let solved = solve_stackelberg(&ctx, FollowerSelector::BestNe, cap)
            .and_then(|best| Ok((best, solve_stackelberg(&ctx, FollowerSelector::WorstNe, cap)?)));
        match solved {
            Ok((best, worst)) => out.push(PeriodOracle { period: z, best, worst }),
            Err(e @ Error::EnumerationCap { .. }) => return Ok(Err(e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(out))
}

fn oracle_records(mode: Mode, point: &SweepPoint, seed: Option<u64>, oracle: &PointOracle) -> Vec<SummaryRecord> {
    [Algorithm::BestNe, Algorithm::WorstNe]
        .into_iter()
        .map(|alg| {
            let mut r = SummaryRecord::blank(mode, point, seed, alg);
            match oracle {
                Ok(periods) => {
                    let reports: Vec<&StackelbergReport> = periods
                        .iter()
                        .map(|p| if alg == Algorithm::BestNe { &p.best } else { &p.worst })
                        .collect();
                    r.total_loss = Some(reports.iter().map(|s| s.total_loss).sum());
                    r.jammer_channels = format_jammer(reports.iter().map(|s| s.jammer_channel));
                    r.uav_channels = format_uavs(reports.iter().map(|s| s.uav_channels.as_slice()));
                }
                Err(msg) => r.status = format!("oracle_cap: {msg}"),
            }
            r
        })
        .collect()
}

/// Seed used for every random stream of one (point, seed) pair.
pub fn point_seed(point: &SweepPoint, seed: u64) -> u64 {
    derive_seed(seed, &point.tags())
}

fn learn(point: &SweepPoint, seed: u64, base: &LearningConfig, traces: bool) -> Result<RunResult> {
    let config = LearningConfig {
        seed: point_seed(point, seed),
        record_traces: traces,
        ..base.clone()
    };
    let mut result = run_all_periods(&point.scenario, &config)?;
    result.seed = seed;
    Ok(result)
}

fn proposed_record(mode: Mode, point: &SweepPoint, seed: u64, run: &RunResult) -> SummaryRecord {
    let mut r = SummaryRecord::blank(mode, point, Some(seed), Algorithm::Proposed);
    r.total_loss = Some(run.total_loss());
    r.epochs = Some(run.epochs_used());
    r.slots = Some(run.slots_used());
    r.converged = Some(run.converged());
    r.jammer_channels = format_jammer(run.periods.iter().map(|p| p.jammer_channel));
    r.uav_channels = format_uavs(run.periods.iter().map(|p| p.uav_channels.as_slice()));
    r
}

fn random_record(mode: Mode, point: &SweepPoint, seed: u64) -> Result<SummaryRecord> {
    let mut r = SummaryRecord::blank(mode, point, Some(seed), Algorithm::Random);
    let ps = point_seed(point, seed);
    let mut total = 0.0;
    for z in 0..point.scenario.n_periods {
        let ctx = PeriodContext::new(&point.scenario, z)?;
        let mut rng = substream(ps, Stream::RandomBaseline { period: z });
        total += random_baseline(&ctx, &mut rng, RANDOM_BASELINE_DRAWS);
    }
    r.total_loss = Some(total);
    Ok(r)
}

fn noncooperative_record(mode: Mode, point: &SweepPoint, seed: u64, oracle: &PointOracle) -> Result<SummaryRecord> {
    let mut r = SummaryRecord::blank(mode, point, Some(seed), Algorithm::Noncooperative);
    let periods = match oracle {
        Ok(p) => p,
        Err(msg) => {
            r.status = format!("oracle_cap: {msg}");
            return Ok(r);
        }
    };
    let ps = point_seed(point, seed);
    let mut total = 0.0;
    let mut converged = true;
    let mut uavs = Vec::new();
    for po in periods {
        let ctx = PeriodContext::new(&point.scenario, po.period)?;
        let mut rng = substream(ps, Stream::NonCooperative { period: po.period });
        let out = noncooperative_reference(&ctx, po.best.jammer_channel, &mut rng, DEFAULT_SWEEP_CAP)?;
        total += out.total_loss;
        converged &= out.converged;
        uavs.push(out.uav_channels);
    }
    r.total_loss = Some(total);
    r.converged = Some(converged);
    r.jammer_channels = format_jammer(periods.iter().map(|p| p.best.jammer_channel));
    r.uav_channels = format_uavs(uavs.iter().map(Vec::as_slice));
    Ok(r)
}

/// Everything an experiment produces, before it is written out.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<SummaryRecord>,
    /// Full learning runs (with traces) in `run` mode.
    pub runs: Vec<RunResult>,
    /// Leader/follower solutions per point in `oracle` and `compare` modes.
    pub oracle: Vec<PointOracle>,
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Validation(vec![crate::error::Violation::new("workers", e.to_string())]))?;
    Ok(pool.install(f))
}

/// Runs a validated experiment.
///
/// In `oracle` mode an enumeration-cap failure is an error; in `compare` it
/// is recorded in the affected rows and the sweep continues.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.ensure_valid()?;
    with_pool(spec.workers, || match spec.mode {
        Mode::Oracle => run_oracle(spec),
        Mode::Run => run_learning(spec, true),
        Mode::SweepChannels | Mode::SweepPower => run_learning(spec, false),
        Mode::Compare => run_compare(spec),
    })?
}

fn jobs(spec: &ExperimentSpec, points: &[SweepPoint]) -> Vec<(usize, u64)> {
    (0..points.len())
        .flat_map(|i| spec.seeds.iter().map(move |&s| (i, s)))
        .collect()
}

fn run_learning(spec: &ExperimentSpec, traces: bool) -> Result<ExperimentOutput> {
    let points = spec.points();
    let runs: Vec<RunResult> = jobs(spec, &points)
        .into_par_iter()
        .map(|(i, seed)| learn(&points[i], seed, &spec.learning, traces))
        .collect::<Result<_>>()?;
    let per_point = spec.seeds.len();
    let records = runs
        .iter()
        .enumerate()
        .map(|(j, run)| proposed_record(spec.mode, &points[j / per_point], run.seed, run))
        .collect();
    Ok(ExperimentOutput {
        records,
        runs: if traces { runs } else { Vec::new() },
        oracle: Vec::new(),
    })
}

fn run_oracle(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let points = spec.points();
    let oracle: Vec<PointOracle> = points
        .par_iter()
        .map(|p| solve_point(p, spec.enumeration_cap))
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    for (p, o) in points.iter().zip(&oracle) {
        if o.is_err() {
            return Err(Error::EnumerationCap {
                size: crate::oracle::profile_count(p.scenario.n_uavs(), p.channels),
                cap: spec.enumeration_cap,
            });
        }
        records.extend(oracle_records(spec.mode, p, None, o));
    }
    Ok(ExperimentOutput {
        records,
        runs: Vec::new(),
        oracle,
    })
}

fn run_compare(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let points = spec.points();
    let oracle: Vec<PointOracle> = points
        .par_iter()
        .map(|p| solve_point(p, spec.enumeration_cap))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<SummaryRecord>> = jobs(spec, &points)
        .into_par_iter()
        .map(|(i, seed)| {
            let p = &points[i];
            let run = learn(p, seed, &spec.learning, false)?;
            let mut rows = vec![proposed_record(spec.mode, p, seed, &run)];
            rows.extend(oracle_records(spec.mode, p, Some(seed), &oracle[i]));
            rows.push(random_record(spec.mode, p, seed)?);
            rows.push(noncooperative_record(spec.mode, p, seed, &oracle[i])?);
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentOutput {
        records: rows.into_iter().flatten().collect(),
        runs: Vec::new(),
        oracle,
    })
}
