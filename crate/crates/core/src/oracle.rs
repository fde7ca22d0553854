//! Exhaustive ground truth for the follower subgame and the leader's choice,
//! plus the random and selfish baselines.
//!
//! Profiles are enumerated in mixed radix with UAV 0 as the least significant
//! digit. Whenever two candidates tie, the one with the lower profile index
//! (or channel) wins, so results never depend on how work is split across
//! threads.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::{definitely_greater, definitely_less};
use crate::game::{jammer_utility_on, total_loss_on, uav_loss_on, JointAction, PeriodContext};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;
pub const RANDOM_BASELINE_DRAWS: usize = 10_000;
pub const DEFAULT_SWEEP_CAP: usize = 1_000;

const CHUNK: u64 = 1 << 14;

/// A UAV channel profile with its total loss and potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileValue {
    pub channels: Vec<usize>,
    pub total_loss: f64,
    pub potential: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeReport {
    pub jammer_channel: usize,
    /// Every pure equilibrium, in enumeration order.
    pub equilibria: Vec<ProfileValue>,
    pub best_ne: ProfileValue,
    pub worst_ne: ProfileValue,
    /// Total-loss minimizer over all profiles.
    pub global_optimum: ProfileValue,
    pub profiles_checked: u64,
}

/// Number of UAV profiles, saturating.
pub fn profile_count(n_uavs: usize, n_channels: usize) -> u128 {
    u32::try_from(n_uavs)
        .ok()
        .and_then(|n| (n_channels as u128).checked_pow(n))
        .unwrap_or(u128::MAX)
}

fn check_cap(ctx: &PeriodContext<'_>, cap: u64) -> Result<u64> {
    let size = profile_count(ctx.n_uavs(), ctx.n_channels());
    if size > cap as u128 {
        return Err(Error::EnumerationCap { size, cap });
    }
    Ok(size as u64)
}

fn decode(mut index: u64, m: usize, out: &mut [usize]) {
    for c in out.iter_mut() {
        *c = (index % m as u64) as usize;
        index /= m as u64;
    }
}

/// Pairwise loss weights: `w[n][k] = p_n p_k H_k + p_k p_n H_n` and the
/// per-UAV jamming cost `p_n p_j H_j`.
struct Weights {
    pair: Vec<Vec<f64>>,
    jam: Vec<f64>,
}

impl Weights {
    fn new(ctx: &PeriodContext<'_>) -> Self {
        let s = ctx.scenario();
        let p = &s.uav_powers;
        let h = ctx.uav_gains();
        let n = ctx.n_uavs();
        let pair = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if a == b { 0.0 } else { p[a] * p[b] * (h[a] + h[b]) })
                    .collect()
            })
            .collect();
        let jam = p.iter().map(|pn| pn * s.jammer_power * ctx.fc_jammer_gain()).collect();
        Self { pair, jam }
    }

    /// Change in total loss when UAV `n` moves to `to`.
    fn move_delta(&self, ch: &[usize], jammer: usize, n: usize, to: usize) -> f64 {
        let from = ch[n];
        let mut d = self.jam[n] * (f64::from(u8::from(to == jammer)) - f64::from(u8::from(from == jammer)));
        for (k, &ck) in ch.iter().enumerate() {
            if k != n {
                d += self.pair[n][k] * (f64::from(u8::from(to == ck)) - f64::from(u8::from(from == ck)));
            }
        }
        d
    }

    /// No unilateral move lowers the total loss (raises the common utility).
    fn is_stable(&self, ch: &[usize], jammer: usize, m: usize) -> bool {
        (0..ch.len()).all(|n| {
            (0..m).all(|to| to == ch[n] || !definitely_less(self.move_delta(ch, jammer, n, to), 0.0))
        })
    }
}

#[derive(Default)]
struct ChunkResult {
    equilibria: Vec<(u64, f64)>,
    optimum: Option<(u64, f64)>,
}

fn better(candidate: (u64, f64), current: Option<(u64, f64)>, minimize: bool) -> bool {
    match current {
        None => true,
        Some((idx, loss)) => {
            let strictly = if minimize { candidate.1 < loss } else { candidate.1 > loss };
            strictly || (candidate.1 == loss && candidate.0 < idx)
        }
    }
}

/// Enumerates every UAV profile against a fixed jammer channel and collects
/// the pure Nash equilibria of the local-altruistic game.
pub fn enumerate_follower_ne(ctx: &PeriodContext<'_>, jammer_channel: usize, cap: u64) -> Result<NeReport> {
    let m = ctx.n_channels();
    if jammer_channel >= m {
        return Err(Error::Index {
            what: "jammer channel",
            index: jammer_channel,
            len: m,
        });
    }
    let total = check_cap(ctx, cap)?;
    let weights = Weights::new(ctx);
    let n = ctx.n_uavs();
    let chunks = total.div_ceil(CHUNK);

    let results: Vec<ChunkResult> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut out = ChunkResult::default();
            let mut ch = vec![0; n];
            for idx in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                decode(idx, m, &mut ch);
                let loss = total_loss_on(ctx, &ch, jammer_channel);
                if better((idx, loss), out.optimum, true) {
                    out.optimum = Some((idx, loss));
                }
                if weights.is_stable(&ch, jammer_channel, m) {
                    out.equilibria.push((idx, loss));
                }
            }
            out
        })
        .collect();

    let mut optimum = None;
    let mut equilibria = Vec::new();
    for r in results {
        if let Some(o) = r.optimum {
            if better(o, optimum, true) {
                optimum = Some(o);
            }
        }
        equilibria.extend(r.equilibria);
    }
    let mut best = None;
    let mut worst = None;
    for &e in &equilibria {
        if better(e, best, true) {
            best = Some(e);
        }
        if better(e, worst, false) {
            worst = Some(e);
        }
    }

    let value = |(idx, loss): (u64, f64)| {
        let mut ch = vec![0; n];
        decode(idx, m, &mut ch);
        let potential = ctx.potential(&JointAction::new(ch.clone(), jammer_channel));
        ProfileValue {
            channels: ch,
            total_loss: loss,
            potential,
        }
    };
    // the total-loss minimizer is always deviation-proof, so the set is nonempty
    let best = best.expect("potential minimizer is an equilibrium");
    Ok(NeReport {
        jammer_channel,
        best_ne: value(best),
        worst_ne: value(worst.expect("nonempty")),
        global_optimum: value(optimum.expect("at least one profile")),
        equilibria: equilibria.into_iter().map(value).collect(),
        profiles_checked: total,
    })
}

/// Deviation-proofness of `uav_channels` against `jammer_channel`, checked
/// through the per-UAV utility rather than the enumeration shortcut.
pub fn is_follower_ne(ctx: &PeriodContext<'_>, uav_channels: &[usize], jammer_channel: usize) -> Result<bool> {
    let a = JointAction::new(uav_channels.to_vec(), jammer_channel);
    ctx.check_action(&a)?;
    for (n, &own) in uav_channels.iter().enumerate() {
        let here = ctx.uav_utility(&a, n)?;
        for c in 0..ctx.n_channels() {
            if c != own && definitely_greater(ctx.uav_utility(&a.with_uav(n, c), n)?, here) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Jamming-payoff maximizing channel against fixed UAV channels.
pub fn jammer_best_response(ctx: &PeriodContext<'_>, uav_channels: &[usize]) -> usize {
    let mut best = 0;
    let mut best_u = jammer_utility_on(ctx, uav_channels, 0);
    for c in 1..ctx.n_channels() {
        let u = jammer_utility_on(ctx, uav_channels, c);
        if definitely_greater(u, best_u) {
            best = c;
            best_u = u;
        }
    }
    best
}

/// Which follower equilibrium the leader anticipates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FollowerSelector {
    BestNe,
    WorstNe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderOption {
    pub jammer_channel: usize,
    pub ne_count: usize,
    /// The anticipated follower equilibrium.
    pub follower: ProfileValue,
    pub jammer_utility: f64,
}

/// Equilibrium checks on a solved leader/follower pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeVerification {
    /// No UAV gains by deviating against the chosen jammer channel.
    pub followers_stable: bool,
    /// No other committed channel yields the jammer more, given the followers'
    /// anticipated response to that channel.
    pub leader_optimal: bool,
    /// No other channel yields the jammer more with the followers held fixed.
    pub jammer_fixed_follower_best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackelbergReport {
    pub selector: FollowerSelector,
    pub options: Vec<LeaderOption>,
    pub jammer_channel: usize,
    pub uav_channels: Vec<usize>,
    pub total_loss: f64,
    pub jammer_utility: f64,
    pub verification: SeVerification,
}

/// Solves the leader's commitment problem by enumerating the follower
/// equilibria for every jammer channel.
pub fn solve_stackelberg(ctx: &PeriodContext<'_>, selector: FollowerSelector, cap: u64) -> Result<StackelbergReport> {
    let mut options = Vec::with_capacity(ctx.n_channels());
    for c in 0..ctx.n_channels() {
        let report = enumerate_follower_ne(ctx, c, cap)?;
        let follower = match selector {
            FollowerSelector::BestNe => report.best_ne,
            FollowerSelector::WorstNe => report.worst_ne,
        };
        options.push(LeaderOption {
            jammer_channel: c,
            ne_count: report.equilibria.len(),
            jammer_utility: jammer_utility_on(ctx, &follower.channels, c),
            follower,
        });
    }
    let mut chosen = 0;
    for (c, o) in options.iter().enumerate() {
        if definitely_greater(o.jammer_utility, options[chosen].jammer_utility) {
            chosen = c;
        }
    }
    let pick = &options[chosen];
    let uav_channels = pick.follower.channels.clone();
    let verification = SeVerification {
        followers_stable: is_follower_ne(ctx, &uav_channels, chosen)?,
        leader_optimal: options
            .iter()
            .all(|o| !definitely_greater(o.jammer_utility, pick.jammer_utility)),
        jammer_fixed_follower_best: (0..ctx.n_channels())
            .all(|c| !definitely_greater(jammer_utility_on(ctx, &uav_channels, c), pick.jammer_utility)),
    };
    Ok(StackelbergReport {
        selector,
        jammer_channel: chosen,
        total_loss: pick.follower.total_loss,
        jammer_utility: pick.jammer_utility,
        uav_channels,
        options,
        verification,
    })
}

/// Independent uniform channel draws for every UAV, then the jammer.
pub fn random_policy(ctx: &PeriodContext<'_>, rng: &mut impl Rng) -> JointAction {
    let m = ctx.n_channels();
    let uav_channels = (0..ctx.n_uavs()).map(|_| rng.random_range(0..m)).collect();
    JointAction::new(uav_channels, rng.random_range(0..m))
}

/// Mean total loss of `draws` random joint actions.
pub fn random_baseline(ctx: &PeriodContext<'_>, rng: &mut impl Rng, draws: usize) -> f64 {
    let mut sum = 0.0;
    for _ in 0..draws {
        let a = random_policy(ctx, rng);
        sum += total_loss_on(ctx, &a.uav_channels, a.jammer_channel);
    }
    sum / draws as f64
}

/// Outcome of selfish best-response iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfishOutcome {
    pub uav_channels: Vec<usize>,
    pub jammer_channel: usize,
    pub total_loss: f64,
    /// Sweeps over all UAVs, including the final quiet one.
    pub sweeps: usize,
    /// False if the sweep cap was hit while UAVs were still moving.
    pub converged: bool,
}

fn selfish_best_response(ctx: &PeriodContext<'_>, ch: &mut [usize], jammer: usize, n: usize) -> bool {
    let current = ch[n];
    let mut best = current;
    let mut best_loss = uav_loss_on(ctx, ch, jammer, n);
    for c in 0..ctx.n_channels() {
        if c == current {
            continue;
        }
        ch[n] = c;
        let loss = uav_loss_on(ctx, ch, jammer, n);
        if definitely_less(loss, best_loss) {
            best = c;
            best_loss = loss;
        }
    }
    ch[n] = best;
    best != current
}

/// Pure equilibrium of the selfish game (each UAV minimizes only its own
/// loss) against a fixed jammer channel, by round-robin best responses from a
/// uniformly random start.
pub fn noncooperative_reference(
    ctx: &PeriodContext<'_>,
    jammer_channel: usize,
    rng: &mut impl Rng,
    sweep_cap: usize,
) -> Result<SelfishOutcome> {
    let m = ctx.n_channels();
    if jammer_channel >= m {
        return Err(Error::Index {
            what: "jammer channel",
            index: jammer_channel,
            len: m,
        });
    }
    let mut ch: Vec<usize> = (0..ctx.n_uavs()).map(|_| rng.random_range(0..m)).collect();
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < sweep_cap {
        sweeps += 1;
        let mut moved = false;
        for n in 0..ch.len() {
            moved |= selfish_best_response(ctx, &mut ch, jammer_channel, n);
        }
        if !moved {
            converged = true;
            break;
        }
    }
    Ok(SelfishOutcome {
        total_loss: total_loss_on(ctx, &ch, jammer_channel),
        uav_channels: ch,
        jammer_channel,
        sweeps,
        converged,
    })
}

/// No UAV lowers its own loss by a unilateral move.
pub fn is_selfish_ne(ctx: &PeriodContext<'_>, uav_channels: &[usize], jammer_channel: usize) -> Result<bool> {
    let a = JointAction::new(uav_channels.to_vec(), jammer_channel);
    ctx.check_action(&a)?;
    for (n, &own) in uav_channels.iter().enumerate() {
        let here = ctx.selfish_utility(&a, n);
        for c in 0..ctx.n_channels() {
            if c != own && definitely_greater(ctx.selfish_utility(&a.with_uav(n, c), n), here) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
