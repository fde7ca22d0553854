//! Scenario file format (TOML).
//!
//! ```toml
//! [world]
//! periods = 6
//! reference_distance = 50.0      # optional, informational only
//!
//! [channels]
//! count = 4
//!
//! [fc]
//! position = [100.0, 140.0]
//!
//! [jammer]
//! position = [120.0, 70.0]
//! power = 30.0
//!
//! [[uavs]]                       # one table per UAV
//! altitude = 100.0
//! power = 10.0
//! start = [20.0, 10.0]           # either start + destination ...
//! destination = [80.0, 30.0]
//! # waypoints = [[x, y], ...]    # ... or periods + 1 explicit waypoints
//!
//! [fading]
//! jammer_gains = [0.5, 0.8, 1.0, 1.5, 2.0]
//! jammer_probs = [0.21, 0.22, 0.14, 0.28, 0.15]
//! fc_gains = [0.5, 1.0, 1.5, 2.0, 2.5]
//! fc_probs = [0.14, 0.28, 0.28, 0.18, 0.12]
//!
//! [constants]
//! noise_db = -70.0
//! path_loss_exponent = 2.0
//! gain_scale = 1.1
//! flight_cost = 1.0
//! balance_factor = 1e-3
//! utility_offset = 1.0
//! ```

use std::path::Path;

use serde::Deserialize;

use super::{validate_scenario, FadingDistribution, Position3, Scenario, UavTrajectory};
use crate::error::{Error, Result, Violation};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    world: World,
    channels: Channels,
    fc: Ground,
    jammer: Jammer,
    uavs: Vec<Uav>,
    fading: Fading,
    constants: Constants,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct World {
    periods: usize,
    #[serde(default = "default_reference_distance")]
    reference_distance: f64,
}

fn default_reference_distance() -> f64 {
    50.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Channels {
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ground {
    position: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Jammer {
    position: [f64; 2],
    power: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Uav {
    altitude: f64,
    power: f64,
    start: Option<[f64; 2]>,
    destination: Option<[f64; 2]>,
    waypoints: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fading {
    jammer_gains: Vec<f64>,
    jammer_probs: Vec<f64>,
    fc_gains: Vec<f64>,
    fc_probs: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Constants {
    noise_db: f64,
    path_loss_exponent: f64,
    gain_scale: f64,
    flight_cost: f64,
    balance_factor: f64,
    utility_offset: f64,
}

/// Parses and validates a scenario. `origin` is only used in error messages.
pub fn parse_scenario(text: &str, origin: &Path) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        message: describe_toml_error(&e),
    })?;
    let periods = file.world.periods;
    let mut violations = Vec::new();
    let mut trajectories = Vec::with_capacity(file.uavs.len());
    for (i, u) in file.uavs.iter().enumerate() {
        match (&u.waypoints, u.start, u.destination) {
            (Some(w), None, None) => trajectories.push(UavTrajectory {
                altitude: u.altitude,
                waypoints: w.clone(),
            }),
            (None, Some(s), Some(d)) if periods > 0 => {
                trajectories.push(UavTrajectory::straight(u.altitude, s, d, periods))
            }
            (None, Some(_), Some(_)) => trajectories.push(UavTrajectory {
                altitude: u.altitude,
                waypoints: Vec::new(),
            }),
            _ => violations.push(Violation::new(
                format!("uavs[{i}]"),
                "give either `waypoints` or both `start` and `destination`",
            )),
        }
    }
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let scenario = Scenario {
        n_channels: file.channels.count,
        n_periods: periods,
        trajectories,
        uav_powers: file.uavs.iter().map(|u| u.power).collect(),
        jammer_pos: Position3::ground(file.jammer.position[0], file.jammer.position[1]),
        fc_pos: Position3::ground(file.fc.position[0], file.fc.position[1]),
        jammer_power: file.jammer.power,
        noise_db: file.constants.noise_db,
        path_loss_exponent: file.constants.path_loss_exponent,
        gain_scale: file.constants.gain_scale,
        flight_cost: file.constants.flight_cost,
        balance_factor: file.constants.balance_factor,
        utility_offset: file.constants.utility_offset,
        jammer_fading: FadingDistribution::new(file.fading.jammer_gains, file.fading.jammer_probs),
        fc_fading: FadingDistribution::new(file.fading.fc_gains, file.fading.fc_probs),
        reference_distance: file.world.reference_distance,
    };
    let violations = validate_scenario(&scenario);
    if violations.is_empty() {
        Ok(scenario)
    } else {
        Err(Error::Validation(violations))
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, path)
}

fn describe_toml_error(e: &toml::de::Error) -> String {
    let msg = e.message().trim().to_string();
    // serde reports a missing table as a missing field; say "section" instead
    let msg = match msg.strip_prefix("missing field `") {
        Some(rest) => format!("missing section or key `{}", rest),
        None => msg,
    };
    match e.span() {
        Some(span) => format!("{msg} (at byte {}..{})", span.start, span.end),
        None => msg,
    }
}
