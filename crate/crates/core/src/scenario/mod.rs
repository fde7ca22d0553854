//! World geometry and channel gains.
//!
//! Periods and UAVs are indexed from zero. Period `z` covers the flight from
//! waypoint `z` to waypoint `z + 1`; the UAV's position "in" period `z` is the
//! period-end waypoint `z + 1`.

mod file;

pub use file::{load_scenario, parse_scenario};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    pub fn distance(&self, other: &Position3) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }

    pub fn horizontal_distance(&self, other: &Position3) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Constant-altitude flight path: the start point followed by one endpoint per
/// period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavTrajectory {
    pub altitude: f64,
    pub waypoints: Vec<[f64; 2]>,
}

impl UavTrajectory {
    /// Straight line from `start` to `destination` split into `periods`
    /// equal legs.
    pub fn straight(altitude: f64, start: [f64; 2], destination: [f64; 2], periods: usize) -> Self {
        let waypoints = (0..=periods)
            .map(|k| {
                let t = k as f64 / periods as f64;
                [
                    start[0] + (destination[0] - start[0]) * t,
                    start[1] + (destination[1] - start[1]) * t,
                ]
            })
            .collect();
        Self { altitude, waypoints }
    }

    /// Fixed position for every period.
    pub fn hovering(altitude: f64, at: [f64; 2], periods: usize) -> Self {
        Self {
            altitude,
            waypoints: vec![at; periods + 1],
        }
    }

    pub fn position(&self, waypoint: usize) -> Position3 {
        let [x, y] = self.waypoints[waypoint];
        Position3::new(x, y, self.altitude)
    }
}

/// Discrete small-scale fading model: gain `gains[s]` occurs with
/// probability `probs[s]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingDistribution {
    pub gains: Vec<f64>,
    pub probs: Vec<f64>,
}

impl FadingDistribution {
    pub fn new(gains: Vec<f64>, probs: Vec<f64>) -> Self {
        Self { gains, probs }
    }

    pub fn point(gain: f64) -> Self {
        Self::new(vec![gain], vec![1.0])
    }

    /// Expected gain, `g · Prᵀ`.
    pub fn expected(&self) -> f64 {
        self.gains.iter().zip(&self.probs).map(|(g, p)| g * p).sum()
    }

    fn violations(&self, field: &str) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.gains.is_empty() || self.gains.len() != self.probs.len() {
            out.push(Violation::new(
                field,
                format!(
                    "fading gains ({}) and probabilities ({}) must be nonempty and the same length",
                    self.gains.len(),
                    self.probs.len()
                ),
            ));
        }
        if self.gains.iter().any(|g| !g.is_finite() || *g < 0.0) {
            out.push(Violation::new(field, "fading gains must be finite and nonnegative"));
        }
        if self.probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            out.push(Violation::new(field, "fading probabilities must be nonnegative"));
        }
        let total: f64 = self.probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            out.push(Violation::new(
                field,
                format!("fading probabilities sum to {total}, expected 1"),
            ));
        }
        out
    }
}

/// Which party's fading model to use for the jammer-to-FC link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainSide {
    /// The jammer's own model of the link (enters the jammer's utility).
    JammerModel,
    /// The FC's model of the link (enters the UAV losses and SINR).
    FcModel,
}

/// Immutable world description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n_channels: usize,
    pub n_periods: usize,
    pub trajectories: Vec<UavTrajectory>,
    /// Transmit power of each UAV in watts.
    pub uav_powers: Vec<f64>,
    pub jammer_pos: Position3,
    pub fc_pos: Position3,
    pub jammer_power: f64,
    /// Noise power in dB; see [`Scenario::noise_linear`].
    pub noise_db: f64,
    pub path_loss_exponent: f64,
    /// Coefficient of the UAV-to-FC gain `gain_scale * d^-alpha`.
    pub gain_scale: f64,
    /// Flight energy per meter (`C_f`).
    pub flight_cost: f64,
    /// Weight balancing flight energy against interference (`C_0`).
    pub balance_factor: f64,
    /// Utility offset `W`.
    pub utility_offset: f64,
    /// Jammer-side fading model of the jammer-to-FC link.
    pub jammer_fading: FadingDistribution,
    /// FC-side fading model of the jammer-to-FC link.
    pub fc_fading: FadingDistribution,
    /// Reference distance carried over from the parameter table. Not used by
    /// any computation.
    pub reference_distance: f64,
}

impl Scenario {
    pub fn n_uavs(&self) -> usize {
        self.trajectories.len()
    }

    pub fn noise_linear(&self) -> f64 {
        10f64.powf(self.noise_db / 10.0)
    }

    fn check_uav(&self, uav: usize) -> Result<()> {
        if uav >= self.n_uavs() {
            return Err(Error::Index {
                what: "uav",
                index: uav,
                len: self.n_uavs(),
            });
        }
        Ok(())
    }

    fn check_period(&self, period: usize) -> Result<()> {
        if period >= self.n_periods {
            return Err(Error::Index {
                what: "period",
                index: period,
                len: self.n_periods,
            });
        }
        Ok(())
    }

    /// 3D distance from the UAV's period-end position to the FC.
    pub fn uav_fc_distance(&self, uav: usize, period: usize) -> Result<f64> {
        self.check_uav(uav)?;
        self.check_period(period)?;
        let traj = &self.trajectories[uav];
        if traj.waypoints.len() <= period + 1 {
            return Err(Error::Index {
                what: "waypoint",
                index: period + 1,
                len: traj.waypoints.len(),
            });
        }
        Ok(traj.position(period + 1).distance(&self.fc_pos))
    }

    /// `gain_scale * d^(-alpha)` for the UAV-to-FC link. Channel-independent.
    pub fn uav_fc_gain(&self, uav: usize, period: usize) -> Result<f64> {
        let d = self.uav_fc_distance(uav, period)?;
        self.distance_gain(d)
    }

    pub(crate) fn distance_gain(&self, d: f64) -> Result<f64> {
        if d <= 0.0 {
            return Err(Error::DegenerateGeometry(
                "UAV coincides with the FC".to_string(),
            ));
        }
        Ok(self.gain_scale * d.powf(-self.path_loss_exponent))
    }

    /// Horizontal jammer-to-FC distance.
    pub fn jammer_fc_distance(&self) -> f64 {
        self.jammer_pos.horizontal_distance(&self.fc_pos)
    }

    /// Expected jammer-to-FC gain under either party's fading model.
    pub fn jammer_fc_gain(&self, side: GainSide) -> Result<f64> {
        let d = self.jammer_fc_distance();
        if d <= 0.0 {
            return Err(Error::DegenerateGeometry(
                "jammer coincides with the FC".to_string(),
            ));
        }
        let fading = match side {
            GainSide::JammerModel => &self.jammer_fading,
            GainSide::FcModel => &self.fc_fading,
        };
        Ok(fading.expected() * d.powf(-self.path_loss_exponent))
    }

    /// Horizontal distance flown by the UAV during `period`.
    pub fn flight_distance(&self, uav: usize, period: usize) -> Result<f64> {
        self.check_uav(uav)?;
        self.check_period(period)?;
        let w = &self.trajectories[uav].waypoints;
        if w.len() <= period + 1 {
            return Err(Error::Index {
                what: "waypoint",
                index: period + 1,
                len: w.len(),
            });
        }
        let [x0, y0] = w[period];
        let [x1, y1] = w[period + 1];
        Ok((x1 - x0).hypot(y1 - y0))
    }

    /// Largest total loss any joint action can produce in any period.
    ///
    /// Every loss term is nonnegative and the all-players-on-one-channel
    /// action switches every indicator on at once, so this bound is attained.
    /// Requires valid geometry.
    pub fn worst_case_loss(&self) -> Result<f64> {
        let h_fc = self.jammer_fc_gain(GainSide::FcModel)?;
        let mut worst: f64 = 0.0;
        for z in 0..self.n_periods {
            let mut loss = 0.0;
            for n in 0..self.n_uavs() {
                let pn = self.uav_powers[n];
                loss += pn * self.jammer_power * h_fc;
                for k in (0..self.n_uavs()).filter(|&k| k != n) {
                    loss += pn * self.uav_powers[k] * self.uav_fc_gain(k, z)?;
                }
                loss += self.flight_cost * self.balance_factor * self.flight_distance(n, z)?;
            }
            worst = worst.max(loss);
        }
        Ok(worst)
    }

    /// Copy with a different channel count.
    pub fn with_channels(&self, n_channels: usize) -> Self {
        Self {
            n_channels,
            ..self.clone()
        }
    }

    /// Copy with every UAV at `uav_power` and the jammer at `jammer_power`.
    pub fn with_powers(&self, uav_power: f64, jammer_power: f64) -> Self {
        Self {
            uav_powers: vec![uav_power; self.n_uavs()],
            jammer_power,
            ..self.clone()
        }
    }
}

/// Checks every invariant and returns all violations found.
///
/// The jammer power may be zero (a jammer-free baseline); UAV powers must be
/// strictly positive.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut v = Vec::new();
    let n = s.n_uavs();
    if n == 0 {
        v.push(Violation::new("uavs", "at least one UAV is required"));
    }
    if s.n_channels < 2 {
        v.push(Violation::new("channels.count", "at least two channels are required"));
    }
    if s.n_periods == 0 {
        v.push(Violation::new("world.periods", "at least one period is required"));
    }
    for (i, t) in s.trajectories.iter().enumerate() {
        if !(t.altitude.is_finite() && t.altitude > 0.0) {
            v.push(Violation::new(format!("uavs[{i}].altitude"), "altitude must be positive"));
        }
        if t.waypoints.len() != s.n_periods + 1 {
            v.push(Violation::new(
                format!("uavs[{i}].waypoints"),
                format!("expected {} waypoints, found {}", s.n_periods + 1, t.waypoints.len()),
            ));
        }
        if t.waypoints.iter().flatten().any(|c| !c.is_finite()) {
            v.push(Violation::new(format!("uavs[{i}].waypoints"), "coordinates must be finite"));
        }
    }
    if s.uav_powers.len() != n {
        v.push(Violation::new(
            "uavs.power",
            format!("expected {n} UAV powers, found {}", s.uav_powers.len()),
        ));
    }
    for (i, p) in s.uav_powers.iter().enumerate() {
        if !(p.is_finite() && *p > 0.0) {
            v.push(Violation::new(format!("uavs[{i}].power"), "transmit power must be positive"));
        }
    }
    if !(s.jammer_power.is_finite() && s.jammer_power >= 0.0) {
        v.push(Violation::new("jammer.power", "jammer power must be nonnegative"));
    }
    if !s.jammer_pos.is_finite() {
        v.push(Violation::new("jammer.position", "coordinates must be finite"));
    }
    if !s.fc_pos.is_finite() {
        v.push(Violation::new("fc.position", "coordinates must be finite"));
    }
    if s.jammer_pos.is_finite() && s.fc_pos.is_finite() && s.jammer_fc_distance() <= 0.0 {
        v.push(Violation::new("jammer.position", "jammer and FC must not coincide"));
    }
    if !(s.path_loss_exponent.is_finite() && s.path_loss_exponent > 0.0) {
        v.push(Violation::new("constants.path_loss_exponent", "must be positive"));
    }
    if !(s.gain_scale.is_finite() && s.gain_scale > 0.0) {
        v.push(Violation::new("constants.gain_scale", "must be positive"));
    }
    if !(s.flight_cost.is_finite() && s.flight_cost >= 0.0) {
        v.push(Violation::new("constants.flight_cost", "must be nonnegative"));
    }
    if !(s.balance_factor.is_finite() && s.balance_factor >= 0.0) {
        v.push(Violation::new("constants.balance_factor", "must be nonnegative"));
    }
    if !s.noise_db.is_finite() {
        v.push(Violation::new("constants.noise_db", "must be finite"));
    }
    v.extend(s.jammer_fading.violations("fading.jammer"));
    v.extend(s.fc_fading.violations("fading.fc"));
    if !(s.utility_offset.is_finite() && s.utility_offset > 0.0) {
        v.push(Violation::new(
            "constants.utility_offset",
            "utility may be negative: offset must be positive",
        ));
    }
    if !v.is_empty() {
        return v;
    }
    for k in 0..n {
        for z in 0..s.n_periods {
            if let Ok(d) = s.uav_fc_distance(k, z) {
                if d <= 0.0 {
                    v.push(Violation::new(
                        format!("uavs[{k}]"),
                        format!("UAV coincides with the FC in period {}", z + 1),
                    ));
                }
            }
        }
    }
    if !v.is_empty() {
        return v;
    }
    match s.worst_case_loss() {
        Ok(worst) if worst > s.utility_offset => v.push(Violation::new(
            "constants.utility_offset",
            format!(
                "utility may be negative: worst-case total loss {worst} exceeds offset {}",
                s.utility_offset
            ),
        )),
        Ok(_) => {}
        Err(e) => v.push(Violation::new("geometry", e.to_string())),
    }
    v
}

/// Returns the scenario unchanged if it is valid.
pub fn ensure_valid(s: &Scenario) -> Result<()> {
    let v = validate_scenario(s);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(v))
    }
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn distance_vertical_and_oblique() {
        let s = hovering(&[([100.0, 140.0], 100.0), ([0.0, 0.0], 100.0)], 2, 1);
        assert_eq!(s.uav_fc_distance(0, 0).unwrap(), 100.0);
        // sqrt(100^2 + 140^2 + 100^2)
        assert!(close(s.uav_fc_distance(1, 0).unwrap(), 39600f64.sqrt(), 1e-15));
        assert!((s.uav_fc_distance(1, 0).unwrap() - 198.997).abs() < 1e-3);
    }

    #[test]
    fn distance_index_errors() {
        let s = hovering(&[([0.0, 0.0], 100.0)], 2, 3);
        assert!(matches!(s.uav_fc_distance(1, 0), Err(Error::Index { what: "uav", .. })));
        assert!(matches!(s.uav_fc_distance(0, 3), Err(Error::Index { what: "period", .. })));
        assert!(matches!(s.flight_distance(0, 5), Err(Error::Index { .. })));
    }

    #[test]
    fn zero_distance_rejected_by_gain() {
        let mut s = hovering(&[([100.0, 140.0], 100.0)], 2, 1);
        s.trajectories[0].altitude = 0.0;
        assert_eq!(s.uav_fc_distance(0, 0).unwrap(), 0.0);
        assert!(matches!(s.uav_fc_gain(0, 0), Err(Error::DegenerateGeometry(_))));
        assert!(!validate_scenario(&s).is_empty());
    }

    #[test]
    fn gain_power_law() {
        let s = hovering(&[([0.0, 0.0], 100.0)], 2, 1);
        assert!(close(s.distance_gain(100.0).unwrap(), 1.1e-4, 1e-14));
        assert_eq!(s.distance_gain(1.0).unwrap(), 1.1);
        let g1 = s.distance_gain(37.0).unwrap();
        let g2 = s.distance_gain(74.0).unwrap();
        assert!(close(g2, g1 / 4.0, 1e-14));
    }

    #[test]
    fn expected_reference_fading() {
        let (ja, fc) = reference_fading();
        assert!((ja.expected() - 1.141).abs() < 1e-12);
        assert!((fc.expected() - 1.43).abs() < 1e-12);
        assert_eq!(FadingDistribution::point(2.0).expected(), 2.0);
    }

    #[test]
    fn jammer_gain_both_sides() {
        let s = hovering(&[([0.0, 0.0], 100.0)], 2, 1);
        // (120,70) to (100,140): 20^2 + 70^2 = 5300
        let fc = s.jammer_fc_gain(GainSide::FcModel).unwrap();
        let ja = s.jammer_fc_gain(GainSide::JammerModel).unwrap();
        assert!(close(fc, 1.43 / 5300.0, 1e-12));
        assert!((fc - 2.6981e-4).abs() < 1e-8);
        assert!(close(ja, 1.141 / 5300.0, 1e-12));
        assert!((ja - 2.1528e-4).abs() < 1e-8);

        let mut flat = s.clone();
        flat.path_loss_exponent = 0.0;
        assert!(close(flat.jammer_fc_gain(GainSide::FcModel).unwrap(), 1.43, 1e-12));

        let mut same = s;
        same.jammer_pos = Position3::ground(100.0, 140.0);
        assert!(matches!(
            same.jammer_fc_gain(GainSide::FcModel),
            Err(Error::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn flight_distances() {
        let mut s = hovering(&[([0.0, 0.0], 100.0)], 2, 2);
        assert_eq!(s.flight_distance(0, 0).unwrap(), 0.0);
        s.trajectories[0].waypoints = vec![[0.0, 0.0], [30.0, 40.0], [30.0, 40.0]];
        assert_eq!(s.flight_distance(0, 0).unwrap(), 50.0);
        assert_eq!(s.flight_distance(0, 1).unwrap(), 0.0);

        let t = UavTrajectory::straight(100.0, [0.0, 0.0], [60.0, 80.0], 4);
        s.n_periods = 4;
        s.trajectories[0] = t;
        for z in 0..4 {
            assert!(close(s.flight_distance(0, z).unwrap(), 100.0 / 4.0, 1e-14));
        }
    }

    #[test]
    fn validator_examples() {
        let s = hovering(&[([10.0, 10.0], 100.0), ([150.0, 60.0], 120.0)], 4, 2);
        assert!(validate_scenario(&s).is_empty());

        let mut bad = s.clone();
        bad.fc_fading.probs = vec![0.1, 0.2, 0.3, 0.2, 0.1];
        let v = validate_scenario(&bad);
        assert!(v.iter().any(|x| x.message.contains("fading probabilities")), "{v:?}");

        let mut bad = s.clone();
        bad.utility_offset = 0.0;
        let v = validate_scenario(&bad);
        assert!(v.iter().any(|x| x.message.contains("utility may be negative")), "{v:?}");

        let mut bad = s;
        bad.utility_offset = 1e-4;
        let v = validate_scenario(&bad);
        assert!(v.iter().any(|x| x.message.contains("utility may be negative")), "{v:?}");
    }

    #[test]
    fn validator_reports_everything_at_once() {
        let mut s = hovering(&[([10.0, 10.0], 100.0)], 1, 1);
        s.uav_powers = vec![-1.0];
        s.path_loss_exponent = -2.0;
        let v = validate_scenario(&s);
        assert!(v.len() >= 3, "{v:?}");
    }

    proptest! {
        #[test]
        fn gain_strictly_decreasing(d1 in 0.5f64..1e4, frac in 0.01f64..0.99) {
            let s = hovering(&[([0.0, 0.0], 100.0)], 2, 1);
            let d0 = d1 * frac;
            let g0 = s.distance_gain(d0).unwrap();
            let g1 = s.distance_gain(d1).unwrap();
            prop_assert!(g0 > 0.0 && g1 > 0.0);
            prop_assert!(g0 > g1);
        }

        #[test]
        fn expected_fading_is_linear(c in 0.0f64..100.0, g in proptest::collection::vec(0.0f64..10.0, 5)) {
            let probs = vec![0.21, 0.22, 0.14, 0.28, 0.15];
            let base = FadingDistribution::new(g.clone(), probs.clone()).expected();
            let scaled = FadingDistribution::new(g.iter().map(|x| x * c).collect(), probs).expected();
            prop_assert!((scaled - c * base).abs() <= 1e-12 * (1.0 + scaled.abs()));
        }

        #[test]
        fn flight_triangle_inequality(w in proptest::collection::vec((-500.0f64..500.0, -500.0f64..500.0), 3)) {
            let mut s = hovering(&[([0.0, 0.0], 100.0)], 2, 2);
            s.trajectories[0].waypoints = w.iter().map(|&(x, y)| [x, y]).collect();
            let a = s.flight_distance(0, 0).unwrap();
            let b = s.flight_distance(0, 1).unwrap();
            let [x0, y0] = s.trajectories[0].waypoints[0];
            let [x2, y2] = s.trajectories[0].waypoints[2];
            prop_assert!((x2 - x0).hypot(y2 - y0) <= a + b + 1e-9);
        }
    }
}
