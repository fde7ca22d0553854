#![allow(dead_code)]

use std::path::PathBuf;

use antijam::scenario::{load_scenario, Scenario};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn shipped_scenario_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/six_uav_mission.scenario")
}

pub fn shipped_scenario() -> Scenario {
    load_scenario(shipped_scenario_path()).expect("shipped scenario loads")
}

/// Random instance built on the shipped scenario's constants: UAV count,
/// altitudes, waypoints (inside a 200 m x 100 m area), powers and jammer
/// power are drawn at random. The utility offset is set to the worst-case
/// loss, the smallest valid value.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, periods: usize) -> Scenario {
    let mut s = shipped_scenario();
    s.n_channels = m;
    s.n_periods = periods;
    s.trajectories.truncate(n);
    while s.trajectories.len() < n {
        s.trajectories.push(s.trajectories[0].clone());
    }
    for t in &mut s.trajectories {
        t.altitude = rng.random_range(20.0..150.0);
        t.waypoints = (0..=periods)
            .map(|_| [rng.random_range(0.0..200.0), rng.random_range(0.0..100.0)])
            .collect();
    }
    s.uav_powers = (0..n).map(|_| rng.random_range(1.0..20.0)).collect();
    s.jammer_power = rng.random_range(5.0..50.0);
    s.utility_offset = s.worst_case_loss().expect("valid geometry");
    s
}
