//! Stochastic learning automata for the jammer (outer epochs) and the UAVs
//! (inner slots).
//!
//! Each epoch the jammer draws the channel the UAVs will face, the UAVs learn
//! against it until every UAV is confident or the slot cap is hit, then the
//! jammer draws again, scores that draw against the UAVs' converged channels
//! and reinforces it. Utilities are normalized into `[0, 1]` before the
//! update: UAVs divide by the utility offset `W`, the jammer by its largest
//! possible payoff `Σ_n p_n p_j H_a`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::game::{jammer_utility_on, total_loss_on, PeriodContext};
use crate::rng::{substream, Stream};
use crate::scenario::{ensure_valid, Scenario};

/// Probability vector over channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn uniform(n_channels: usize) -> Self {
        Self(vec![1.0 / n_channels as f64; n_channels])
    }

    /// Degenerate strategy on `channel`.
    pub fn pure(n_channels: usize, channel: usize) -> Self {
        let mut p = vec![0.0; n_channels];
        p[channel] = 1.0;
        Self(p)
    }

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let s = Self(probs);
        if s.is_valid() {
            Ok(s)
        } else {
            Err(Error::Validation(vec![Violation::new(
                "strategy",
                format!("not a probability vector: {:?}", s.0),
            )]))
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries in `[0, 1]` summing to one within `1e-12`.
    pub fn is_valid(&self) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|p| (0.0..=1.0).contains(p))
            && (self.0.iter().sum::<f64>() - 1.0).abs() <= 1e-12
    }

    pub fn max_prob(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Most likely channel; the lowest index wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate() {
            if p > self.0[best] {
                best = i;
            }
        }
        best
    }

    fn reinforce(&mut self, chosen: usize, normalized_utility: f64, step_size: f64) {
        let rate = step_size * normalized_utility;
        for (m, p) in self.0.iter_mut().enumerate() {
            if m == chosen {
                *p += rate * (1.0 - *p);
            } else {
                *p -= rate * *p;
            }
        }
    }
}

/// Draws a channel with probability `probs[m]` using one uniform draw.
pub fn sample_channel(strategy: &MixedStrategy, rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (m, &p) in strategy.probs().iter().enumerate() {
        if p > 0.0 {
            last_positive = m;
        }
        acc += p;
        if u < acc {
            return m;
        }
    }
    last_positive
}

/// Maps a raw utility in `[0, bound]` to `[0, 1]`.
///
/// A zero bound (a jammer with no power) normalizes everything to zero.
pub fn normalize_utility(raw: f64, bound: f64) -> Result<f64> {
    if bound <= 0.0 {
        return if raw.abs() <= crate::float::ABS_TOL {
            Ok(0.0)
        } else {
            Err(Error::NormalizationRange { value: raw, bound })
        };
    }
    let slack = crate::float::tolerance(raw, bound);
    if raw < -slack || raw > bound + slack {
        return Err(Error::NormalizationRange { value: raw, bound });
    }
    Ok((raw / bound).clamp(0.0, 1.0))
}

/// Linear reward-inaction update: the chosen channel moves toward 1 by
/// `b·ũ·(1 − θ)`, every other channel shrinks by the factor `1 − b·ũ`.
pub fn sla_update(
    strategy: &MixedStrategy,
    chosen: usize,
    normalized_utility: f64,
    step_size: f64,
) -> MixedStrategy {
    let mut next = strategy.clone();
    next.reinforce(chosen, normalized_utility, step_size);
    debug_assert!(next.is_valid(), "{next:?}");
    next
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearningConfig {
    /// UAV step size `b1`.
    pub b1: f64,
    /// Jammer step size `b2`.
    pub b2: f64,
    /// Jammer convergence probability `Q`.
    pub q_threshold: f64,
    /// UAV convergence probability.
    pub inner_q_threshold: f64,
    pub max_epochs: usize,
    /// Slot cap for each UAV learning phase.
    pub max_slots: usize,
    pub seed: u64,
    /// Restart the UAV strategies from uniform at every epoch.
    pub reset_per_epoch: bool,
    pub record_traces: bool,
}

impl Default for LearningConfig {
    fn default() -> Self {
        Self {
            b1: 0.2,
            b2: 0.3,
            q_threshold: 0.999,
            inner_q_threshold: 0.999,
            max_epochs: 500,
            max_slots: 300,
            seed: 1,
            reset_per_epoch: false,
            record_traces: true,
        }
    }
}

impl LearningConfig {
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(self.b1) {
            v.push(Violation::new("b1", format!("step size {} must lie in (0, 1)", self.b1)));
        }
        if !open_unit(self.b2) {
            v.push(Violation::new("b2", format!("step size {} must lie in (0, 1)", self.b2)));
        }
        if !(self.q_threshold > 0.5 && self.q_threshold < 1.0) {
            v.push(Violation::new("q_threshold", "must lie in (0.5, 1)"));
        }
        if !(self.inner_q_threshold > 0.5 && self.inner_q_threshold < 1.0) {
            v.push(Violation::new("inner_q_threshold", "must lie in (0.5, 1)"));
        }
        if self.max_epochs == 0 {
            v.push(Violation::new("max_epochs", "must be at least 1"));
        }
        if self.max_slots == 0 {
            v.push(Violation::new("max_slots", "must be at least 1"));
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

/// One UAV learning slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavTraceRow {
    pub epoch: usize,
    pub slot: usize,
    pub channels: Vec<usize>,
    /// Common local-altruistic utility of the sampled joint action.
    pub utility: f64,
    pub total_loss: f64,
    /// Strategy of every UAV after the update.
    pub probs: Vec<Vec<f64>>,
}

/// One jammer epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JammerTraceRow {
    pub epoch: usize,
    /// Channel the UAVs faced.
    pub faced: usize,
    /// Channel scored and reinforced.
    pub scored: usize,
    pub utility: f64,
    pub total_loss: f64,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PeriodTrace {
    pub uav_rows: Vec<UavTraceRow>,
    pub jammer_rows: Vec<JammerTraceRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UavPhase {
    /// Argmax channel of every UAV at the end of the phase.
    pub channels: Vec<usize>,
    pub slots: usize,
    pub converged: bool,
}

fn all_confident(strategies: &[MixedStrategy], threshold: f64) -> bool {
    strategies.iter().all(|s| s.max_prob() > threshold)
}

/// Runs UAV learning slots against a fixed jammer channel until every UAV's
/// largest probability exceeds `inner_q_threshold` or `max_slots` slots have
/// been played. `rngs[n]` drives UAV `n`.
pub fn run_uav_phase(
    ctx: &PeriodContext<'_>,
    jammer_channel: usize,
    strategies: &mut [MixedStrategy],
    config: &LearningConfig,
    rngs: &mut [ChaCha8Rng],
    epoch: usize,
    mut trace: Option<&mut PeriodTrace>,
) -> Result<UavPhase> {
    let w = ctx.scenario().utility_offset;
    let mut channels = vec![0; strategies.len()];
    let mut slots = 0;
    while slots < config.max_slots && !all_confident(strategies, config.inner_q_threshold) {
        for (n, s) in strategies.iter().enumerate() {
            channels[n] = sample_channel(s, &mut rngs[n]);
        }
        let loss = total_loss_on(ctx, &channels, jammer_channel);
        let utility = w - loss;
        if crate::float::definitely_less(utility, 0.0) {
            return Err(Error::NegativeUtility { value: utility });
        }
        let utility = utility.max(0.0);
        let normalized = normalize_utility(utility, w)?;
        for (n, s) in strategies.iter_mut().enumerate() {
            s.reinforce(channels[n], normalized, config.b1);
        }
        if let Some(t) = trace.as_deref_mut() {
            t.uav_rows.push(UavTraceRow {
                epoch,
                slot: slots,
                channels: channels.clone(),
                utility,
                total_loss: loss,
                probs: strategies.iter().map(|s| s.probs().to_vec()).collect(),
            });
        }
        slots += 1;
    }
    Ok(UavPhase {
        channels: strategies.iter().map(MixedStrategy::argmax).collect(),
        slots,
        converged: all_confident(strategies, config.inner_q_threshold),
    })
}

/// Learned outcome of one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodOutcome {
    pub period: usize,
    pub uav_channels: Vec<usize>,
    pub jammer_channel: usize,
    /// Total loss of the learned joint action.
    pub total_loss: f64,
    pub jammer_utility: f64,
    pub epochs_used: usize,
    /// Slots summed over every epoch's UAV phase.
    pub slots_used: usize,
    /// Slots used by each epoch's UAV phase.
    pub phase_slots: Vec<usize>,
    /// Whether each epoch's UAV phase ended confident.
    pub phase_converged: Vec<bool>,
    pub jammer_converged: bool,
    pub uavs_converged: bool,
    pub uav_strategies: Vec<MixedStrategy>,
    pub jammer_strategy: MixedStrategy,
    pub trace: Option<PeriodTrace>,
}

/// Full nested jammer/UAV learning loop for one period.
pub fn run_period(ctx: &PeriodContext<'_>, config: &LearningConfig) -> Result<PeriodOutcome> {
    let period = ctx.period();
    let n = ctx.n_uavs();
    let m = ctx.n_channels();
    let mut jammer_rng = substream(config.seed, Stream::Jammer { period });
    let mut uav_rngs: Vec<ChaCha8Rng> = (0..n)
        .map(|uav| substream(config.seed, Stream::Uav { period, uav }))
        .collect();
    let mut jammer = MixedStrategy::uniform(m);
    let mut uavs = vec![MixedStrategy::uniform(m); n];
    let mut trace = config.record_traces.then(PeriodTrace::default);
    let bound = ctx.jammer_utility_bound();

    let mut phase_slots = Vec::new();
    let mut phase_converged = Vec::new();
    let mut epochs = 0;
    while epochs < config.max_epochs && jammer.max_prob() <= config.q_threshold {
        let faced = sample_channel(&jammer, &mut jammer_rng);
        if config.reset_per_epoch && epochs > 0 {
            uavs.iter_mut().for_each(|s| *s = MixedStrategy::uniform(m));
        }
        let phase = run_uav_phase(ctx, faced, &mut uavs, config, &mut uav_rngs, epochs, trace.as_mut())?;
        phase_slots.push(phase.slots);
        phase_converged.push(phase.converged);

        let scored = sample_channel(&jammer, &mut jammer_rng);
        let utility = jammer_utility_on(ctx, &phase.channels, scored);
        let normalized = normalize_utility(utility, bound)?;
        jammer.reinforce(scored, normalized, config.b2);
        if let Some(t) = trace.as_mut() {
            t.jammer_rows.push(JammerTraceRow {
                epoch: epochs,
                faced,
                scored,
                utility,
                total_loss: total_loss_on(ctx, &phase.channels, scored),
                probs: jammer.probs().to_vec(),
            });
        }
        epochs += 1;
    }

    let uav_channels: Vec<usize> = uavs.iter().map(MixedStrategy::argmax).collect();
    let jammer_channel = jammer.argmax();
    Ok(PeriodOutcome {
        period,
        total_loss: total_loss_on(ctx, &uav_channels, jammer_channel),
        jammer_utility: jammer_utility_on(ctx, &uav_channels, jammer_channel),
        uav_channels,
        jammer_channel,
        epochs_used: epochs,
        slots_used: phase_slots.iter().sum(),
        phase_slots,
        phase_converged,
        jammer_converged: jammer.max_prob() > config.q_threshold,
        uavs_converged: all_confident(&uavs, config.inner_q_threshold),
        uav_strategies: uavs,
        jammer_strategy: jammer,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub periods: Vec<PeriodOutcome>,
}

impl RunResult {
    /// Learned total loss summed over periods.
    pub fn total_loss(&self) -> f64 {
        self.periods.iter().map(|p| p.total_loss).sum()
    }

    pub fn epochs_used(&self) -> usize {
        self.periods.iter().map(|p| p.epochs_used).sum()
    }

    pub fn slots_used(&self) -> usize {
        self.periods.iter().map(|p| p.slots_used).sum()
    }

    pub fn converged(&self) -> bool {
        self.periods.iter().all(|p| p.jammer_converged && p.uavs_converged)
    }
}

/// Learns every period of a validated scenario independently.
pub fn run_all_periods(scenario: &Scenario, config: &LearningConfig) -> Result<RunResult> {
    ensure_valid(scenario)?;
    config.ensure_valid()?;
    let periods = (0..scenario.n_periods)
        .map(|z| {
            let ctx = PeriodContext::new(scenario, z)?;
            run_period(&ctx, config)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunResult {
        seed: config.seed,
        periods,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use crate::game::testing::{random_scenario, rng};
    use crate::scenario::testing::hovering;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn sampling_degenerate() {
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let s = MixedStrategy::pure(4, 0);
        assert!((0..1000).all(|_| sample_channel(&s, &mut r) == 0));
        let s = MixedStrategy::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert!((0..1000).all(|_| sample_channel(&s, &mut r) == 1));
    }

    #[test]
    fn sampling_uniform_frequencies() {
        let mut r = ChaCha8Rng::seed_from_u64(99);
        let s = MixedStrategy::uniform(4);
        let draws = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            counts[sample_channel(&s, &mut r)] += 1;
        }
        // binomial standard deviation of each count
        let sigma = (draws as f64 * 0.25 * 0.75).sqrt();
        let mut chi2 = 0.0;
        for c in counts {
            let dev = c as f64 - draws as f64 * 0.25;
            assert!(dev.abs() < 3.0 * sigma, "{counts:?}");
            chi2 += dev * dev / (draws as f64 * 0.25);
        }
        // chi-square with 3 degrees of freedom, 99.9% quantile
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_utility(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(normalize_utility(0.0, 1.0).unwrap(), 0.0);
        assert!((normalize_utility(0.3, 0.6).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(normalize_utility(1.5, 1.0), Err(Error::NormalizationRange { .. })));
        assert!(matches!(normalize_utility(-0.1, 1.0), Err(Error::NormalizationRange { .. })));
        assert_eq!(normalize_utility(0.0, 0.0).unwrap(), 0.0);

        let s = hovering(&[([0.0, 0.0], 100.0), ([50.0, 0.0], 110.0)], 3, 1);
        let ctx = PeriodContext::new(&s, 0).unwrap();
        let full = jammer_utility_on(&ctx, &[1, 1], 1);
        assert!((normalize_utility(full, ctx.jammer_utility_bound()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn update_example() {
        let s = MixedStrategy::uniform(4);
        let next = sla_update(&s, 0, 1.0, 0.2);
        let expected = [0.4, 0.2, 0.2, 0.2];
        for (a, b) in next.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(sla_update(&s, 2, 0.0, 0.2), s);
    }

    #[test]
    fn invalid_strategies_rejected() {
        assert!(MixedStrategy::new(vec![0.5, 0.6]).is_err());
        assert!(MixedStrategy::new(vec![-0.1, 1.1]).is_err());
        assert!(MixedStrategy::new(vec![]).is_err());
    }

    #[test]
    fn config_ranges() {
        assert!(LearningConfig::default().violations().is_empty());
        let bad = LearningConfig {
            b1: 1.5,
            b2: 0.0,
            max_slots: 0,
            ..Default::default()
        };
        let v = bad.violations();
        assert_eq!(v.len(), 3, "{v:?}");
        assert!(v[0].field == "b1");
    }

    #[test]
    fn single_uav_evades_fixed_jammer() {
        // zero flight cost, jammer fixed on channel 0: channel 1 strictly dominates
        let s = hovering(&[([100.0, 140.0], 100.0)], 2, 1);
        let ctx = PeriodContext::new(&s, 0).unwrap();
        let l0 = ctx.total_loss(&crate::game::JointAction::new(vec![0], 0));
        let l1 = ctx.total_loss(&crate::game::JointAction::new(vec![1], 0));
        assert!(l1 < l0);
        let config = LearningConfig {
            b1: 0.05,
            max_slots: 20_000,
            ..Default::default()
        };
        let mut hits = 0;
        for seed in 0..20 {
            let mut strategies = vec![MixedStrategy::uniform(2)];
            let mut rngs = vec![ChaCha8Rng::seed_from_u64(seed)];
            let phase = run_uav_phase(&ctx, 0, &mut strategies, &config, &mut rngs, 0, None).unwrap();
            assert!(phase.converged);
            hits += usize::from(phase.channels == vec![1]);
        }
        assert!(hits >= 12, "evaded in {hits}/20 runs");
    }

    #[test]
    fn degenerate_equilibrium_is_a_fixed_point() {
        let s = hovering(&[([0.0, 0.0], 100.0), ([150.0, 80.0], 120.0)], 3, 1);
        let ctx = PeriodContext::new(&s, 0).unwrap();
        // UAVs apart and off the jammed channel 0: a pure equilibrium
        let mut strategies = vec![MixedStrategy::pure(3, 1), MixedStrategy::pure(3, 2)];
        let mut rngs = vec![ChaCha8Rng::seed_from_u64(1), ChaCha8Rng::seed_from_u64(2)];
        let config = LearningConfig {
            inner_q_threshold: 0.9999999,
            max_slots: 50,
            ..Default::default()
        };
        let before = strategies.clone();
        let phase = run_uav_phase(&ctx, 0, &mut strategies, &config, &mut rngs, 0, None).unwrap();
        assert_eq!(phase.channels, vec![1, 2]);
        assert_eq!(strategies, before);
    }

    #[test]
    fn jammer_follows_forced_uavs() {
        // UAV strategies start degenerate on channel 1 and stay there
        let s = hovering(&[([0.0, 0.0], 100.0), ([150.0, 80.0], 120.0)], 2, 1);
        let ctx = PeriodContext::new(&s, 0).unwrap();
        let config = LearningConfig::default();
        let bound = ctx.jammer_utility_bound();
        let mut jammer = MixedStrategy::uniform(2);
        let mut r = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let scored = sample_channel(&jammer, &mut r);
            let u = normalize_utility(jammer_utility_on(&ctx, &[1, 1], scored), bound).unwrap();
            jammer = sla_update(&jammer, scored, u, config.b2);
            if jammer.max_prob() > config.q_threshold {
                break;
            }
        }
        assert_eq!(jammer.argmax(), 1);
        assert!(jammer.max_prob() > config.q_threshold);
    }

    #[test]
    fn period_run_is_deterministic() {
        let s = hovering(&[([0.0, 0.0], 100.0), ([150.0, 80.0], 120.0), ([60.0, 90.0], 140.0)], 3, 2);
        let config = LearningConfig::default();
        let a = run_all_periods(&s, &config).unwrap();
        let b = run_all_periods(&s, &config).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let other = run_all_periods(&s, &LearningConfig { seed: 2, ..config }).unwrap();
        assert_ne!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&other).unwrap());
    }

    #[test]
    fn single_period_matches_run_period() {
        let s = hovering(&[([0.0, 0.0], 100.0), ([150.0, 80.0], 120.0)], 3, 1);
        let config = LearningConfig::default();
        let all = run_all_periods(&s, &config).unwrap();
        let one = run_period(&PeriodContext::new(&s, 0).unwrap(), &config).unwrap();
        assert_eq!(all.periods, vec![one]);
    }

    #[test]
    fn periods_are_independent() {
        let mut r = rng(8);
        let s = random_scenario(&mut r, 3, 3, 4);
        let config = LearningConfig::default();
        let all = run_all_periods(&s, &config).unwrap();
        for z in (0..4).rev() {
            let alone = run_period(&PeriodContext::new(&s, z).unwrap(), &config).unwrap();
            assert_eq!(alone, all.periods[z]);
        }
    }

    #[test]
    fn reset_per_epoch_restarts_uavs() {
        let s = hovering(&[([0.0, 0.0], 100.0), ([150.0, 80.0], 120.0)], 3, 1);
        let config = LearningConfig {
            reset_per_epoch: true,
            max_epochs: 5,
            ..Default::default()
        };
        let out = run_period(&PeriodContext::new(&s, 0).unwrap(), &config).unwrap();
        assert_eq!(out.phase_slots.len(), out.epochs_used);
        assert!(out.phase_slots.iter().all(|&k| k > 0));

        let persistent = run_period(&PeriodContext::new(&s, 0).unwrap(), &LearningConfig::default()).unwrap();
        assert!(persistent.phase_slots[1..].iter().all(|&k| k == 0));
    }

    #[test]
    fn trace_rows_are_strategies() {
        let mut r = rng(4);
        let s = random_scenario(&mut r, 3, 4, 1);
        let out = run_period(&PeriodContext::new(&s, 0).unwrap(), &LearningConfig::default()).unwrap();
        let trace = out.trace.unwrap();
        assert_eq!(trace.jammer_rows.len(), out.epochs_used);
        assert_eq!(trace.uav_rows.len(), out.slots_used);
        for row in &trace.uav_rows {
            for p in &row.probs {
                assert!(MixedStrategy(p.clone()).is_valid());
            }
        }
        for row in &trace.jammer_rows {
            assert!(MixedStrategy(row.probs.clone()).is_valid());
        }
    }

    proptest! {
        #[test]
        fn update_preserves_simplex(
            raw in proptest::collection::vec(0.001f64..1.0, 2..8),
            pick in any::<usize>(),
            u in 0.0f64..=1.0,
            b in 0.001f64..0.999,
        ) {
            let total: f64 = raw.iter().sum();
            let s = MixedStrategy(raw.iter().map(|x| x / total).collect());
            prop_assume!(s.is_valid());
            let next = sla_update(&s, pick % s.len(), u, b);
            prop_assert!(next.is_valid());
        }

        #[test]
        fn repeated_updates_stay_on_simplex(seed in any::<u64>(), m in 2usize..7, b in 0.01f64..0.99) {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let mut s = MixedStrategy::uniform(m);
            for _ in 0..5000 {
                let c = sample_channel(&s, &mut r);
                let u: f64 = r.random();
                s = sla_update(&s, c, u, b);
            }
            prop_assert!(s.is_valid(), "{:?}", s);
        }
    }
}
