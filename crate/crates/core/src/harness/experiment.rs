//! Experiment specifications: which scenario, which mode, which seeds and
//! sweep grids.
//!
//! An experiment file is TOML. Relative paths resolve against the file's
//! directory.
//!
//! ```toml
//! scenario = "six_uav_mission.scenario"
//! mode = "compare"
//! seeds = [1, 2, 3]
//! out = "results"
//! channels = [2, 3, 4, 5, 6]
//! pj_grid = [0.0, 10.0, 20.0, 30.0, 40.0]
//! pn_grid = [2.0, 4.0, 6.0, 8.0, 10.0]
//! workers = 4
//!
//! [learning]
//! b1 = 0.2
//! max_epochs = 500
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::oracle::DEFAULT_ENUMERATION_CAP;
use crate::scenario::{load_scenario, validate_scenario, Scenario};
use crate::sla::LearningConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Learn every period of the scenario once per seed.
    Run,
    /// Exhaustive equilibria of the scenario.
    Oracle,
    /// Learned loss over a list of channel counts.
    SweepChannels,
    /// Learned loss over a grid of jammer and UAV powers.
    SweepPower,
    /// Learned loss against every baseline over a list of channel counts.
    Compare,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Oracle => "oracle",
            Mode::SweepChannels => "sweep-channels",
            Mode::SweepPower => "sweep-power",
            Mode::Compare => "compare",
        }
    }

    pub fn is_stochastic(self) -> bool {
        self != Mode::Oracle
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_CHANNELS: [usize; 5] = [2, 3, 4, 5, 6];
pub const DEFAULT_PJ_GRID: [f64; 5] = [0.0, 10.0, 20.0, 30.0, 40.0];
pub const DEFAULT_PN_GRID: [f64; 5] = [2.0, 4.0, 6.0, 8.0, 10.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub scenario_path: PathBuf,
    pub scenario: Scenario,
    pub mode: Mode,
    pub seeds: Vec<u64>,
    pub channels: Vec<usize>,
    pub pj_grid: Vec<f64>,
    pub pn_grid: Vec<f64>,
    pub out_dir: PathBuf,
    /// Learning parameters. The seed field is replaced per run.
    pub learning: LearningConfig,
    /// Worker threads; 0 lets the thread pool decide.
    pub workers: usize,
    pub enumeration_cap: u64,
}

/// One parameter setting of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub channels: usize,
    pub jammer_power: f64,
    /// Common UAV power, if all UAVs share one.
    pub uav_power: Option<f64>,
    pub scenario: Scenario,
}

impl SweepPoint {
    fn new(scenario: Scenario) -> Self {
        let first = scenario.uav_powers.first().copied();
        let uav_power = first.filter(|p| scenario.uav_powers.iter().all(|q| q == p));
        Self {
            channels: scenario.n_channels,
            jammer_power: scenario.jammer_power,
            uav_power,
            scenario,
        }
    }

    /// Values identifying the point, used to derive its random streams.
    pub fn tags(&self) -> Vec<u64> {
        let mut tags = vec![self.channels as u64, self.jammer_power.to_bits()];
        tags.extend(self.scenario.uav_powers.iter().map(|p| p.to_bits()));
        tags
    }

    pub fn label(&self) -> String {
        let pn = match self.uav_power {
            Some(p) => p.to_string(),
            None => "mixed".into(),
        };
        format!("M={} p_j={} p_n={}", self.channels, self.jammer_power, pn)
    }
}

impl ExperimentSpec {
    /// Spec with default grids and learning parameters.
    pub fn new(mode: Mode, scenario_path: impl Into<PathBuf>, scenario: Scenario) -> Self {
        Self {
            scenario_path: scenario_path.into(),
            scenario,
            mode,
            seeds: vec![1],
            channels: DEFAULT_CHANNELS.to_vec(),
            pj_grid: DEFAULT_PJ_GRID.to_vec(),
            pn_grid: DEFAULT_PN_GRID.to_vec(),
            out_dir: PathBuf::from("out"),
            learning: LearningConfig::default(),
            workers: 0,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    /// Loads the scenario at `scenario_path` and builds a default spec.
    pub fn from_scenario_file(mode: Mode, scenario_path: impl Into<PathBuf>) -> Result<Self> {
        let path = scenario_path.into();
        let scenario = load_scenario(&path)?;
        Ok(Self::new(mode, path, scenario))
    }

    /// Parameter settings visited by the mode, in output order.
    pub fn points(&self) -> Vec<SweepPoint> {
        match self.mode {
            Mode::Run | Mode::Oracle => vec![SweepPoint::new(self.scenario.clone())],
            Mode::SweepChannels | Mode::Compare => self
                .channels
                .iter()
                .map(|&m| SweepPoint::new(self.scenario.with_channels(m)))
                .collect(),
            Mode::SweepPower => self
                .pj_grid
                .iter()
                .flat_map(|&pj| {
                    self.pn_grid
                        .iter()
                        .map(move |&pn| SweepPoint::new(self.scenario.with_powers(pn, pj)))
                })
                .collect(),
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.mode.is_stochastic() && self.seeds.is_empty() {
            v.push(Violation::new("seeds", format!("mode {} needs at least one seed", self.mode)));
        }
        match self.mode {
            Mode::SweepChannels | Mode::Compare if self.channels.is_empty() => {
                v.push(Violation::new("channels", "channel list is empty"));
            }
            Mode::SweepPower => {
                if self.pj_grid.is_empty() {
                    v.push(Violation::new("pj_grid", "jammer power grid is empty"));
                }
                if self.pn_grid.is_empty() {
                    v.push(Violation::new("pn_grid", "UAV power grid is empty"));
                }
            }
            _ => {}
        }
        if self.enumeration_cap == 0 {
            v.push(Violation::new("enumeration_cap", "must be at least 1"));
        }
        v.extend(self.learning.violations());
        let base = validate_scenario(&self.scenario);
        if !base.is_empty() {
            v.extend(base);
            return v;
        }
        for p in self.points() {
            for mut bad in validate_scenario(&p.scenario) {
                bad.field = format!("{} ({})", bad.field, p.label());
                v.push(bad);
            }
        }
        v
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    scenario: PathBuf,
    mode: Mode,
    #[serde(default)]
    seeds: Option<Vec<u64>>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    channels: Option<Vec<usize>>,
    #[serde(default)]
    pj_grid: Option<Vec<f64>>,
    #[serde(default)]
    pn_grid: Option<Vec<f64>>,
    #[serde(default)]
    workers: Option<usize>,
    #[serde(default)]
    enumeration_cap: Option<u64>,
    #[serde(default)]
    learning: LearningConfig,
}

/// Reads and validates an experiment file, loading its scenario.
pub fn load_experiment(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: ExperimentFile = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.message().trim().to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    let scenario_path = base.join(&file.scenario);
    let mut spec = ExperimentSpec::from_scenario_file(file.mode, scenario_path)?;
    if let Some(s) = file.seeds {
        spec.seeds = s;
    }
    if let Some(o) = file.out {
        spec.out_dir = base.join(o);
    }
    if let Some(c) = file.channels {
        spec.channels = c;
    }
    if let Some(g) = file.pj_grid {
        spec.pj_grid = g;
    }
    if let Some(g) = file.pn_grid {
        spec.pn_grid = g;
    }
    if let Some(w) = file.workers {
        spec.workers = w;
    }
    if let Some(c) = file.enumeration_cap {
        spec.enumeration_cap = c;
    }
    spec.learning = file.learning;
    spec.ensure_valid()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    const SCENARIO: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/six_uav_mission.scenario");

    #[test]
    fn shipped_scenario_with_defaults_is_valid() {
        for mode in [Mode::Run, Mode::Oracle, Mode::SweepChannels, Mode::SweepPower, Mode::Compare] {
            let spec = ExperimentSpec::from_scenario_file(mode, SCENARIO).unwrap();
            assert!(spec.violations().is_empty(), "{mode}: {:?}", spec.violations());
        }
    }

    #[test]
    fn point_counts() {
        let mut spec = ExperimentSpec::from_scenario_file(Mode::SweepPower, SCENARIO).unwrap();
        assert_eq!(spec.points().len(), 25);
        spec.mode = Mode::Compare;
        let pts = spec.points();
        assert_eq!(pts.iter().map(|p| p.channels).collect::<Vec<_>>(), vec![2, 3, 4, 5, 6]);
        assert_eq!(pts[0].uav_power, Some(10.0));
        spec.mode = Mode::Run;
        assert_eq!(spec.points()[0].channels, 4);
    }

    #[test]
    fn experiment_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        fs::copy(SCENARIO, dir.path().join("s.scenario")).unwrap();
        let spec_path = dir.path().join("exp.toml");
        fs::write(
            &spec_path,
            "scenario = \"s.scenario\"\nmode = \"sweep-channels\"\nseeds = [4, 5]\nchannels = [2, 3]\nout = \"o\"\n[learning]\nb1 = 0.1\n",
        )
        .unwrap();
        let spec = load_experiment(&spec_path).unwrap();
        assert_eq!(spec.mode, Mode::SweepChannels);
        assert_eq!(spec.seeds, vec![4, 5]);
        assert_eq!(spec.learning.b1, 0.1);
        assert_eq!(spec.learning.b2, 0.3);
        assert_eq!(spec.out_dir, dir.path().join("o"));
    }

    #[test]
    fn all_violations_reported_together() {
        let dir = tempfile::tempdir().unwrap();
        fs::copy(SCENARIO, dir.path().join("s.scenario")).unwrap();
        let spec_path = dir.path().join("exp.toml");
        fs::write(
            &spec_path,
            "scenario = \"s.scenario\"\nmode = \"compare\"\nseeds = []\nchannels = []\n[learning]\nb1 = 1.5\n",
        )
        .unwrap();
        match load_experiment(&spec_path) {
            Err(Error::Validation(v)) => {
                let fields: Vec<_> = v.iter().map(|x| x.field.as_str()).collect();
                assert_eq!(fields, vec!["seeds", "channels", "b1"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_points_validated() {
        let mut spec = ExperimentSpec::from_scenario_file(Mode::SweepPower, SCENARIO).unwrap();
        spec.pn_grid = vec![10.0, 1000.0];
        let v = spec.violations();
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.field.contains("p_n=1000")), "{v:?}");
    }
}
