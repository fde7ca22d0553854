//! Per-period game quantities: interference, SINR, losses, utilities and the
//! potential of the follower subgame.
//!
//! Channels are zero-based. All functions here are pure and assume the joint
//! action matches the context (see [`PeriodContext::check_action`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{GainSide, Scenario};

/// One channel per UAV plus the jammer's channel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointAction {
    pub uav_channels: Vec<usize>,
    pub jammer_channel: usize,
}

impl JointAction {
    pub fn new(uav_channels: Vec<usize>, jammer_channel: usize) -> Self {
        Self {
            uav_channels,
            jammer_channel,
        }
    }

    /// Copy with UAV `uav` moved to `channel`.
    pub fn with_uav(&self, uav: usize, channel: usize) -> Self {
        let mut next = self.clone();
        next.uav_channels[uav] = channel;
        next
    }
}

/// `f(x, y)`: 1 when both players use the same channel.
#[inline]
pub fn indicator(x: usize, y: usize) -> f64 {
    if x == y {
        1.0
    } else {
        0.0
    }
}

/// A scenario frozen at one period, with gains and flight distances
/// precomputed.
#[derive(Debug, Clone)]
pub struct PeriodContext<'a> {
    scenario: &'a Scenario,
    period: usize,
    uav_gains: Vec<f64>,
    flight: Vec<f64>,
    /// Jammer-side expected gain `H_a`.
    jammer_gain: f64,
    /// FC-side expected gain `H_j`.
    fc_jammer_gain: f64,
}

/// Utility and potential changes for one unilateral UAV move.
///
/// The potential is a loss-type function (it falls when the deviating UAV's
/// utility rises), so `potential` is reported as `Φ(old) − Φ(new)`. For an
/// exact potential game the two fields are equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationDelta {
    /// `u_n(new) − u_n(old)`.
    pub utility: f64,
    /// `Φ(old) − Φ(new)`.
    pub potential: f64,
}

impl<'a> PeriodContext<'a> {
    pub fn new(scenario: &'a Scenario, period: usize) -> Result<Self> {
        let n = scenario.n_uavs();
        let uav_gains = (0..n)
            .map(|k| scenario.uav_fc_gain(k, period))
            .collect::<Result<Vec<_>>>()?;
        let flight = (0..n)
            .map(|k| scenario.flight_distance(k, period))
            .collect::<Result<Vec<_>>>()?;
        if scenario.uav_powers.len() != n {
            return Err(Error::Index {
                what: "uav power",
                index: scenario.uav_powers.len(),
                len: n,
            });
        }
        Ok(Self {
            scenario,
            period,
            uav_gains,
            flight,
            jammer_gain: scenario.jammer_fc_gain(GainSide::JammerModel)?,
            fc_jammer_gain: scenario.jammer_fc_gain(GainSide::FcModel)?,
        })
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.scenario
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn n_uavs(&self) -> usize {
        self.uav_gains.len()
    }

    pub fn n_channels(&self) -> usize {
        self.scenario.n_channels
    }

    /// `H_{n,z}` for every UAV.
    pub fn uav_gains(&self) -> &[f64] {
        &self.uav_gains
    }

    pub fn flight_distances(&self) -> &[f64] {
        &self.flight
    }

    pub fn jammer_gain(&self) -> f64 {
        self.jammer_gain
    }

    pub fn fc_jammer_gain(&self) -> f64 {
        self.fc_jammer_gain
    }

    pub fn check_action(&self, a: &JointAction) -> Result<()> {
        let m = self.n_channels();
        if a.uav_channels.len() != self.n_uavs() {
            return Err(Error::Index {
                what: "joint action length",
                index: a.uav_channels.len(),
                len: self.n_uavs(),
            });
        }
        if let Some(&bad) = a.uav_channels.iter().find(|&&c| c >= m) {
            return Err(Error::Index {
                what: "channel",
                index: bad,
                len: m,
            });
        }
        if a.jammer_channel >= m {
            return Err(Error::Index {
                what: "jammer channel",
                index: a.jammer_channel,
                len: m,
            });
        }
        Ok(())
    }

    #[inline]
    fn power(&self, n: usize) -> f64 {
        self.scenario.uav_powers[n]
    }

    #[inline]
    fn flight_loss(&self, n: usize) -> f64 {
        self.scenario.flight_cost * self.scenario.balance_factor * self.flight[n]
    }

    /// `I_n`: received co-channel power from the other UAVs.
    pub fn mutual_interference(&self, a: &JointAction, n: usize) -> f64 {
        mutual_on(self, &a.uav_channels, n)
    }

    /// `J_n`: received jamming power (FC-side gain).
    pub fn malicious_interference(&self, a: &JointAction, n: usize) -> f64 {
        self.scenario.jammer_power * self.fc_jammer_gain * indicator(a.uav_channels[n], a.jammer_channel)
    }

    /// Diagnostic SINR of UAV `n` at the FC.
    pub fn sinr(&self, a: &JointAction, n: usize) -> f64 {
        let signal = self.power(n) * self.uav_gains[n];
        signal
            / (self.scenario.noise_linear()
                + self.mutual_interference(a, n)
                + self.malicious_interference(a, n))
    }

    /// `E_n`: weighted interference plus flight energy.
    pub fn uav_loss(&self, a: &JointAction, n: usize) -> f64 {
        uav_loss_on(self, &a.uav_channels, a.jammer_channel, n)
    }

    /// Sum of all UAV losses.
    pub fn total_loss(&self, a: &JointAction) -> f64 {
        total_loss_on(self, &a.uav_channels, a.jammer_channel)
    }

    /// Local-altruistic utility `W − (E_n + Σ_{k≠n} E_k)`. Identical for every
    /// UAV at a fixed joint action.
    pub fn uav_utility(&self, a: &JointAction, n: usize) -> Result<f64> {
        if n >= self.n_uavs() {
            return Err(Error::Index {
                what: "uav",
                index: n,
                len: self.n_uavs(),
            });
        }
        // own loss plus everyone else's, summed in UAV order so every UAV
        // sees bit-identical values
        let u = self.scenario.utility_offset - self.total_loss(a);
        if crate::float::definitely_less(u, 0.0) {
            return Err(Error::NegativeUtility { value: u });
        }
        Ok(u.max(0.0))
    }

    /// Selfish utility `W − E_n` used by the non-cooperative reference.
    pub fn selfish_utility(&self, a: &JointAction, n: usize) -> f64 {
        self.scenario.utility_offset - self.uav_loss(a, n)
    }

    /// Jamming payoff with the jammer-side gain `H_a`.
    pub fn jammer_utility(&self, a: &JointAction) -> f64 {
        jammer_utility_on(self, &a.uav_channels, a.jammer_channel)
    }

    /// Largest possible jammer utility: every UAV on the jammed channel.
    pub fn jammer_utility_bound(&self) -> f64 {
        let pj = self.scenario.jammer_power;
        (0..self.n_uavs())
            .map(|n| self.power(n) * pj * self.jammer_gain)
            .sum()
    }

    /// Potential of the follower subgame, `Φ1 + Φ2 + Φ3`.
    ///
    /// `Φ3` sums the flight term over all UAVs; it does not depend on the
    /// action.
    pub fn potential(&self, a: &JointAction) -> f64 {
        let s = self.scenario;
        let n_uavs = self.n_uavs();
        let ch = &a.uav_channels;
        let mut phi1 = 0.0;
        for n in 0..n_uavs {
            for k in 0..n_uavs {
                if k != n {
                    phi1 += s.uav_powers[n] * s.uav_powers[k] * self.uav_gains[k] * indicator(ch[n], ch[k]);
                }
            }
        }
        let mut phi2 = 0.0;
        for (&p, &c) in s.uav_powers.iter().zip(ch) {
            phi2 += p * s.jammer_power * self.fc_jammer_gain * indicator(c, a.jammer_channel);
        }
        let mut phi3 = 0.0;
        for n in 0..n_uavs {
            phi3 += s.flight_cost * s.balance_factor * self.flight[n];
        }
        phi1 + phi2 + phi3
    }

    /// Utility and potential change when UAV `n` moves to `new_channel`.
    pub fn deviation_delta(&self, a: &JointAction, n: usize, new_channel: usize) -> Result<DeviationDelta> {
        let moved = a.with_uav(n, new_channel);
        Ok(DeviationDelta {
            utility: self.uav_utility(&moved, n)? - self.uav_utility(a, n)?,
            potential: self.potential(a) - self.potential(&moved),
        })
    }
}

// Slice-based kernels shared with the enumeration oracle and the learner.

#[inline]
pub(crate) fn mutual_on(ctx: &PeriodContext<'_>, ch: &[usize], n: usize) -> f64 {
    let p = &ctx.scenario.uav_powers;
    let mut acc = 0.0;
    for (k, &ck) in ch.iter().enumerate() {
        if k != n && ck == ch[n] {
            acc += p[k] * ctx.uav_gains[k];
        }
    }
    acc
}

#[inline]
pub(crate) fn uav_loss_on(ctx: &PeriodContext<'_>, ch: &[usize], jammer: usize, n: usize) -> f64 {
    let s = ctx.scenario;
    let pn = s.uav_powers[n];
    pn * s.jammer_power * ctx.fc_jammer_gain * indicator(ch[n], jammer)
        + pn * mutual_on(ctx, ch, n)
        + ctx.flight_loss(n)
}

#[inline]
pub(crate) fn total_loss_on(ctx: &PeriodContext<'_>, ch: &[usize], jammer: usize) -> f64 {
    (0..ch.len()).map(|n| uav_loss_on(ctx, ch, jammer, n)).sum()
}

#[inline]
pub(crate) fn jammer_utility_on(ctx: &PeriodContext<'_>, ch: &[usize], jammer: usize) -> f64 {
    let s = ctx.scenario;
    ch.iter()
        .enumerate()
        .map(|(n, &c)| s.uav_powers[n] * s.jammer_power * ctx.jammer_gain * indicator(c, jammer))
        .sum()
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::scenario::testing::hovering;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random scenario with the reference constants: UAV positions, altitudes,
    /// powers and per-period waypoints drawn at random. The utility offset is
    /// raised to the worst-case loss when needed.
    pub fn random_scenario(rng: &mut ChaCha8Rng, n: usize, m: usize, z: usize) -> Scenario {
        let mut s = hovering(&vec![([0.0, 0.0], 100.0); n], m, z);
        for t in &mut s.trajectories {
            t.altitude = rng.random_range(20.0..150.0);
            t.waypoints = (0..=z)
                .map(|_| [rng.random_range(0.0..200.0), rng.random_range(0.0..100.0)])
                .collect();
        }
        s.uav_powers = (0..n).map(|_| rng.random_range(1.0..20.0)).collect();
        s.jammer_power = rng.random_range(5.0..50.0);
        s.utility_offset = s.worst_case_loss().unwrap().max(1.0);
        s
    }

    pub fn random_action(rng: &mut ChaCha8Rng, n: usize, m: usize) -> JointAction {
        JointAction::new((0..n).map(|_| rng.random_range(0..m)).collect(), rng.random_range(0..m))
    }

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }
}
