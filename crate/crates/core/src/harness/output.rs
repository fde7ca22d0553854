//! CSV and JSON writers.
//!
//! Files written to the output directory:
//!
//! - `summary.csv`: one [`SummaryRecord`] per row, columns in field order.
//! - `result.json`: run manifest with seeds, config hash, software version,
//!   per-point means and trend checks.
//! - `seed_<seed>/trace_<period>_<learner>.csv` (`run` mode): strategy
//!   trajectories, learner `jammer` or `uav<n>`, all indices one-based.
//! - `oracle.json` (`oracle` mode): leader/follower solutions per period.
//!
//! Nothing time- or host-dependent is written, so identical inputs give
//! byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::experiment::{ExperimentSpec, Mode};
use super::runner::{Algorithm, ExperimentOutput, SummaryRecord};
use super::stats::{check_trend, mean, Direction, StepCheck};
use crate::error::{Error, Result};
use crate::oracle::RANDOM_BASELINE_DRAWS;
use crate::scenario::Scenario;
use crate::sla::{LearningConfig, PeriodOutcome, RunResult};

pub const SUMMARY_COLUMNS: [&str; 13] = [
    "mode",
    "channels",
    "jammer_power",
    "uav_power",
    "seed",
    "algorithm",
    "total_loss",
    "epochs",
    "slots",
    "converged",
    "jammer_channels",
    "uav_channels",
    "status",
];

const TREND_ALPHA: f64 = 0.05;

pub fn write_summary(path: &Path, records: &[SummaryRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if records.is_empty() {
        w.write_record(SUMMARY_COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn num(x: f64) -> String {
    x.to_string()
}

fn write_rows(path: &Path, header: Vec<String>, rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn prob_columns(m: usize) -> impl Iterator<Item = String> {
    (1..=m).map(|c| format!("p{c}"))
}

/// Writes the jammer and per-UAV strategy trajectories of one period. Row 0
/// of every file is the uniform starting strategy.
pub fn write_period_traces(dir: &Path, outcome: &PeriodOutcome) -> Result<Vec<PathBuf>> {
    let Some(trace) = &outcome.trace else {
        return Ok(Vec::new());
    };
    let m = outcome.jammer_strategy.len();
    let uniform = vec![num(1.0 / m as f64); m];
    let period = outcome.period + 1;
    let mut written = Vec::new();

    let mut header: Vec<String> = ["iteration", "epoch", "faced", "scored", "utility", "total_loss"]
        .map(String::from)
        .to_vec();
    header.extend(prob_columns(m));
    let mut rows = vec![["0", "", "", "", "", ""].map(String::from).into_iter().chain(uniform.clone()).collect()];
    for (i, r) in trace.jammer_rows.iter().enumerate() {
        let mut row = vec![
            (i + 1).to_string(),
            (r.epoch + 1).to_string(),
            (r.faced + 1).to_string(),
            (r.scored + 1).to_string(),
            num(r.utility),
            num(r.total_loss),
        ];
        row.extend(r.probs.iter().copied().map(num));
        rows.push(row);
    }
    let path = dir.join(format!("trace_{period}_jammer.csv"));
    write_rows(&path, header, rows)?;
    written.push(path);

    for n in 0..outcome.uav_channels.len() {
        let mut header: Vec<String> = ["iteration", "epoch", "slot", "channel", "utility", "total_loss"]
            .map(String::from)
            .to_vec();
        header.extend(prob_columns(m));
        let mut rows = vec![["0", "", "", "", "", ""].map(String::from).into_iter().chain(uniform.clone()).collect()];
        for (i, r) in trace.uav_rows.iter().enumerate() {
            let mut row = vec![
                (i + 1).to_string(),
                (r.epoch + 1).to_string(),
                (r.slot + 1).to_string(),
                (r.channels[n] + 1).to_string(),
                num(r.utility),
                num(r.total_loss),
            ];
            row.extend(r.probs[n].iter().copied().map(num));
            rows.push(row);
        }
        let path = dir.join(format!("trace_{period}_uav{}.csv", n + 1));
        write_rows(&path, header, rows)?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_run_traces(dir: &Path, run: &RunResult) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for p in &run.periods {
        written.extend(write_period_traces(dir, p)?);
    }
    Ok(written)
}

#[derive(Serialize)]
struct HashInput<'a> {
    mode: Mode,
    scenario: &'a Scenario,
    seeds: &'a [u64],
    channels: &'a [usize],
    pj_grid: &'a [f64],
    pn_grid: &'a [f64],
    learning: &'a LearningConfig,
    enumeration_cap: u64,
}

/// SHA-256 of everything that determines an experiment's results.
pub fn config_hash(spec: &ExperimentSpec) -> String {
    let input = HashInput {
        mode: spec.mode,
        scenario: &spec.scenario,
        seeds: &spec.seeds,
        channels: &spec.channels,
        pj_grid: &spec.pj_grid,
        pn_grid: &spec.pn_grid,
        learning: &spec.learning,
        enumeration_cap: spec.enumeration_cap,
    };
    let bytes = serde_json::to_vec(&input).expect("serializable");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointMean {
    pub channels: usize,
    pub jammer_power: f64,
    pub uav_power: Option<f64>,
    pub algorithm: Algorithm,
    pub mean_total_loss: Option<f64>,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub axis: String,
    /// Parameter held fixed along this axis, if any.
    pub fixed: Option<String>,
    pub direction: Direction,
    pub steps: Vec<StepCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub software: &'static str,
    pub version: &'static str,
    pub mode: Mode,
    pub scenario: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub rng: &'static str,
    pub learning: LearningConfig,
    pub enumeration_cap: u64,
    pub random_draws: usize,
    pub records: usize,
    pub files: Vec<String>,
    pub means: Vec<PointMean>,
    pub trends: Vec<Trend>,
}

type PointKey = (usize, u64, Option<u64>);

fn key(r: &SummaryRecord) -> PointKey {
    (r.channels, r.jammer_power.to_bits(), r.uav_power.map(f64::to_bits))
}

/// Per-seed proposed losses grouped by point, in record order.
fn proposed_series(records: &[SummaryRecord]) -> Vec<(PointKey, Vec<f64>)> {
    let mut out: Vec<(PointKey, Vec<f64>)> = Vec::new();
    for r in records.iter().filter(|r| r.algorithm == Algorithm::Proposed) {
        let Some(loss) = r.total_loss else { continue };
        match out.iter_mut().find(|(k, _)| *k == key(r)) {
            Some((_, v)) => v.push(loss),
            None => out.push((key(r), vec![loss])),
        }
    }
    out
}

pub fn point_means(records: &[SummaryRecord]) -> Vec<PointMean> {
    let mut groups: Vec<(PointKey, Algorithm, &SummaryRecord, Vec<f64>, usize)> = Vec::new();
    for r in records {
        let k = key(r);
        let idx = match groups.iter().position(|g| g.0 == k && g.1 == r.algorithm) {
            Some(i) => i,
            None => {
                groups.push((k, r.algorithm, r, Vec::new(), 0));
                groups.len() - 1
            }
        };
        groups[idx].4 += 1;
        if let Some(l) = r.total_loss {
            groups[idx].3.push(l);
        }
    }
    groups.sort_by_key(|g| (g.0 .0, g.1));
    groups
        .into_iter()
        .map(|(_, alg, r, losses, runs)| PointMean {
            channels: r.channels,
            jammer_power: r.jammer_power,
            uav_power: r.uav_power,
            algorithm: alg,
            mean_total_loss: (losses.len() == runs && runs > 0).then(|| mean(&losses)),
            runs,
        })
        .collect()
}

/// Trend checks of the proposed algorithm: nonincreasing in the channel
/// count, nondecreasing along each power axis.
pub fn trends(spec: &ExperimentSpec, records: &[SummaryRecord]) -> Vec<Trend> {
    let series = proposed_series(records);
    let find = |k: PointKey| series.iter().find(|(q, _)| *q == k).map(|(_, v)| v.clone());
    match spec.mode {
        Mode::SweepChannels | Mode::Compare if series.len() > 1 => {
            let mut ordered = series.clone();
            ordered.sort_by_key(|(k, _)| k.0);
            vec![Trend {
                axis: "channels".into(),
                fixed: None,
                direction: Direction::NonIncreasing,
                steps: check_trend(
                    &ordered.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
                    Direction::NonIncreasing,
                    TREND_ALPHA,
                ),
            }]
        }
        Mode::SweepPower => {
            let m = spec.scenario.n_channels;
            let mut pj: Vec<f64> = spec.pj_grid.clone();
            let mut pn: Vec<f64> = spec.pn_grid.clone();
            pj.sort_by(f64::total_cmp);
            pn.sort_by(f64::total_cmp);
            let mut out = Vec::new();
            for &n in &pn {
                let s: Option<Vec<Vec<f64>>> = pj.iter().map(|&j| find((m, j.to_bits(), Some(n.to_bits())))).collect();
                if let Some(s) = s.filter(|s| s.len() > 1) {
                    out.push(Trend {
                        axis: "jammer_power".into(),
                        fixed: Some(format!("uav_power={n}")),
                        direction: Direction::NonDecreasing,
                        steps: check_trend(&s, Direction::NonDecreasing, TREND_ALPHA),
                    });
                }
            }
            for &j in &pj {
                let s: Option<Vec<Vec<f64>>> = pn.iter().map(|&n| find((m, j.to_bits(), Some(n.to_bits())))).collect();
                if let Some(s) = s.filter(|s| s.len() > 1) {
                    out.push(Trend {
                        axis: "uav_power".into(),
                        fixed: Some(format!("jammer_power={j}")),
                        direction: Direction::NonDecreasing,
                        steps: check_trend(&s, Direction::NonDecreasing, TREND_ALPHA),
                    });
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

fn relative(out_dir: &Path, p: &Path) -> String {
    p.strip_prefix(out_dir).unwrap_or(p).to_string_lossy().replace('\\', "/")
}

/// Writes every output file of an experiment into `spec.out_dir` and returns
/// the manifest.
pub fn emit_outputs(spec: &ExperimentSpec, output: &ExperimentOutput) -> Result<Manifest> {
    let dir = &spec.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();

    let summary = dir.join("summary.csv");
    write_summary(&summary, &output.records)?;
    files.push(summary);

    let mut by_seed: BTreeMap<u64, &RunResult> = BTreeMap::new();
    for run in &output.runs {
        by_seed.entry(run.seed).or_insert(run);
    }
    for (seed, run) in by_seed {
        files.extend(write_run_traces(&dir.join(format!("seed_{seed}")), run)?);
    }

    if spec.mode == Mode::Oracle {
        let path = dir.join("oracle.json");
        let text = serde_json::to_string_pretty(&output.oracle)?;
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }

    let result = dir.join("result.json");
    files.push(result.clone());
    let manifest = Manifest {
        software: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        mode: spec.mode,
        scenario: spec.scenario_path.to_string_lossy().into_owned(),
        config_hash: config_hash(spec),
        seeds: spec.seeds.clone(),
        rng: "ChaCha8 (rand_chacha), SplitMix64 seed derivation",
        learning: spec.learning.clone(),
        enumeration_cap: spec.enumeration_cap,
        random_draws: RANDOM_BASELINE_DRAWS,
        records: output.records.len(),
        files: files.iter().map(|p| relative(dir, p)).collect(),
        means: point_means(&output.records),
        trends: trends(spec, &output.records),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&result, text + "\n").map_err(|e| Error::io(&result, e))?;
    Ok(manifest)
}
