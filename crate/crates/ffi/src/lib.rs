//! C ABI over the simulator.
//!
//! Scenarios and learning results are opaque handles created and freed by
//! this library. Every fallible call returns an [`AjStatus`]; on failure the
//! message is available from [`aj_last_error`] on the same thread until the
//! next failing call. Channels, UAVs and periods are zero-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use antijam::game::{JointAction, PeriodContext};
use antijam::oracle::{solve_stackelberg, FollowerSelector};
use antijam::scenario::{load_scenario, parse_scenario, Scenario};
use antijam::sla::{run_all_periods, LearningConfig, RunResult};
use antijam::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AjStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Io = 5,
    EnumerationCap = 6,
    OutOfRange = 7,
    Numeric = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Follower equilibrium anticipated by the leader.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AjSelector {
    BestNe = 0,
    WorstNe = 1,
}

/// Opaque scenario handle.
pub struct AjScenario(Scenario);

/// Opaque learning result handle.
pub struct AjRunResult(RunResult);

/// Learning parameters. Obtain defaults from [`aj_learning_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AjLearningConfig {
    pub b1: f64,
    pub b2: f64,
    pub q_threshold: f64,
    pub inner_q_threshold: f64,
    pub max_epochs: usize,
    pub max_slots: usize,
    pub seed: u64,
    pub reset_per_epoch: bool,
}

impl From<AjLearningConfig> for LearningConfig {
    fn from(c: AjLearningConfig) -> Self {
        LearningConfig {
            b1: c.b1,
            b2: c.b2,
            q_threshold: c.q_threshold,
            inner_q_threshold: c.inner_q_threshold,
            max_epochs: c.max_epochs,
            max_slots: c.max_slots,
            seed: c.seed,
            reset_per_epoch: c.reset_per_epoch,
            record_traces: false,
        }
    }
}

/// Learned outcome of one period.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AjPeriodSummary {
    pub jammer_channel: usize,
    pub total_loss: f64,
    pub jammer_utility: f64,
    pub epochs: usize,
    pub slots: usize,
    pub converged: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> AjStatus {
    match e {
        Error::Index { .. } => AjStatus::OutOfRange,
        Error::DegenerateGeometry(_) | Error::NegativeUtility { .. } | Error::NormalizationRange { .. } => {
            AjStatus::Numeric
        }
        Error::Validation(_) => AjStatus::Validation,
        Error::EnumerationCap { .. } => AjStatus::EnumerationCap,
        Error::Parse { .. } => AjStatus::Parse,
        Error::Io { .. } | Error::Csv(_) | Error::Json(_) => AjStatus::Io,
    }
}

struct Fail(AjStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AjStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AjStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AjStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(AjStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(AjStatus::NullPointer, format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(AjStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AjStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn channels<'a>(p: *const usize, len: usize) -> Result<&'a [usize], Fail> {
    if p.is_null() {
        return Err(Fail(AjStatus::NullPointer, "uav_channels is null".into()));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn aj_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn aj_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads and validates a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aj_scenario_load(path: *const c_char, out_scenario: *mut *mut AjScenario) -> AjStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let slot = out(out_scenario, "out_scenario")?;
        let s = load_scenario(Path::new(path))?;
        *slot = Box::into_raw(Box::new(AjScenario(s)));
        Ok(())
    })
}

/// Parses and validates scenario text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aj_scenario_parse(text: *const c_char, out_scenario: *mut *mut AjScenario) -> AjStatus {
    guard(|| {
        let text = c_str(text, "text")?;
        let slot = out(out_scenario, "out_scenario")?;
        let s = parse_scenario(text, Path::new("<memory>"))?;
        *slot = Box::into_raw(Box::new(AjScenario(s)));
        Ok(())
    })
}

/// Frees a scenario. Null is ignored.
///
/// # Safety
/// `scenario` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aj_scenario_free(scenario: *mut AjScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Writes the UAV, channel and period counts.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aj_scenario_dims(
    scenario: *const AjScenario,
    n_uavs: *mut usize,
    n_channels: *mut usize,
    n_periods: *mut usize,
) -> AjStatus {
    guard(|| {
        let s = &borrow(scenario, "scenario")?.0;
        *out(n_uavs, "n_uavs")? = s.n_uavs();
        *out(n_channels, "n_channels")? = s.n_channels;
        *out(n_periods, "n_periods")? = s.n_periods;
        Ok(())
    })
}

unsafe fn evaluate(
    scenario: *const AjScenario,
    period: usize,
    uav_channels: *const usize,
    n_uavs: usize,
    jammer_channel: usize,
    value: *mut f64,
    f: impl FnOnce(&PeriodContext<'_>, &JointAction) -> Result<f64, Error>,
) -> AjStatus {
    guard(|| {
        let s = &borrow(scenario, "scenario")?.0;
        let ch = channels(uav_channels, n_uavs)?;
        let slot = out(value, "out_value")?;
        let ctx = PeriodContext::new(s, period)?;
        let a = JointAction::new(ch.to_vec(), jammer_channel);
        ctx.check_action(&a)?;
        *slot = f(&ctx, &a)?;
        Ok(())
    })
}

/// Total loss of a joint action in `period`.
///
/// # Safety
/// `uav_channels` must point to `n_uavs` values; other pointers valid.
#[no_mangle]
pub unsafe extern "C" fn aj_total_loss(
    scenario: *const AjScenario,
    period: usize,
    uav_channels: *const usize,
    n_uavs: usize,
    jammer_channel: usize,
    out_value: *mut f64,
) -> AjStatus {
    evaluate(scenario, period, uav_channels, n_uavs, jammer_channel, out_value, |c, a| Ok(c.total_loss(a)))
}

/// Jamming payoff of a joint action in `period`.
///
/// # Safety
/// As for [`aj_total_loss`].
#[no_mangle]
pub unsafe extern "C" fn aj_jammer_utility(
    scenario: *const AjScenario,
    period: usize,
    uav_channels: *const usize,
    n_uavs: usize,
    jammer_channel: usize,
    out_value: *mut f64,
) -> AjStatus {
    evaluate(scenario, period, uav_channels, n_uavs, jammer_channel, out_value, |c, a| Ok(c.jammer_utility(a)))
}

/// Potential of the follower game at a joint action in `period`.
///
/// # Safety
/// As for [`aj_total_loss`].
#[no_mangle]
pub unsafe extern "C" fn aj_potential(
    scenario: *const AjScenario,
    period: usize,
    uav_channels: *const usize,
    n_uavs: usize,
    jammer_channel: usize,
    out_value: *mut f64,
) -> AjStatus {
    evaluate(scenario, period, uav_channels, n_uavs, jammer_channel, out_value, |c, a| Ok(c.potential(a)))
}

#[no_mangle]
pub extern "C" fn aj_learning_config_default() -> AjLearningConfig {
    let d = LearningConfig::default();
    AjLearningConfig {
        b1: d.b1,
        b2: d.b2,
        q_threshold: d.q_threshold,
        inner_q_threshold: d.inner_q_threshold,
        max_epochs: d.max_epochs,
        max_slots: d.max_slots,
        seed: d.seed,
        reset_per_epoch: d.reset_per_epoch,
    }
}

/// Learns every period of the scenario.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aj_run(
    scenario: *const AjScenario,
    config: *const AjLearningConfig,
    out_result: *mut *mut AjRunResult,
) -> AjStatus {
    guard(|| {
        let s = &borrow(scenario, "scenario")?.0;
        let c = *borrow(config, "config")?;
        let slot = out(out_result, "out_result")?;
        let r = run_all_periods(s, &c.into())?;
        *slot = Box::into_raw(Box::new(AjRunResult(r)));
        Ok(())
    })
}

/// Frees a learning result. Null is ignored.
///
/// # Safety
/// `result` must come from [`aj_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aj_run_result_free(result: *mut AjRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Total loss summed over periods.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aj_run_result_total_loss(result: *const AjRunResult, out_value: *mut f64) -> AjStatus {
    guard(|| {
        let r = &borrow(result, "result")?.0;
        *out(out_value, "out_value")? = r.total_loss();
        Ok(())
    })
}

fn copy_channels(src: &[usize], dst: *mut usize, capacity: usize) -> Result<(), Fail> {
    if dst.is_null() {
        return Err(Fail(AjStatus::NullPointer, "uav_channels_out is null".into()));
    }
    if capacity < src.len() {
        return Err(Fail(
            AjStatus::BufferTooSmall,
            format!("need room for {} channels, got {capacity}", src.len()),
        ));
    }
    // SAFETY: caller guarantees `dst` holds `capacity >= src.len()` values
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len()) };
    Ok(())
}

/// Learned outcome of one period. `uav_channels_out` receives one channel
/// per UAV and must hold at least `capacity` values.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aj_run_result_period(
    result: *const AjRunResult,
    period: usize,
    uav_channels_out: *mut usize,
    capacity: usize,
    out_summary: *mut AjPeriodSummary,
) -> AjStatus {
    guard(|| {
        let r = &borrow(result, "result")?.0;
        let summary = out(out_summary, "out_summary")?;
        let p = r.periods.get(period).ok_or_else(|| {
            Fail(
                AjStatus::OutOfRange,
                format!("period {period} out of range (0..{})", r.periods.len()),
            )
        })?;
        copy_channels(&p.uav_channels, uav_channels_out, capacity)?;
        *summary = AjPeriodSummary {
            jammer_channel: p.jammer_channel,
            total_loss: p.total_loss,
            jammer_utility: p.jammer_utility,
            epochs: p.epochs_used,
            slots: p.slots_used,
            converged: p.jammer_converged && p.uavs_converged,
        };
        Ok(())
    })
}

/// Exhaustive leader/follower solution of one period.
///
/// # Safety
/// All pointers must be valid; `uav_channels_out` holds `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn aj_solve_stackelberg(
    scenario: *const AjScenario,
    period: usize,
    selector: AjSelector,
    enumeration_cap: u64,
    uav_channels_out: *mut usize,
    capacity: usize,
    out_jammer_channel: *mut usize,
    out_total_loss: *mut f64,
) -> AjStatus {
    guard(|| {
        let s = &borrow(scenario, "scenario")?.0;
        let jam = out(out_jammer_channel, "out_jammer_channel")?;
        let loss = out(out_total_loss, "out_total_loss")?;
        let ctx = PeriodContext::new(s, period)?;
        let selector = match selector {
            AjSelector::BestNe => FollowerSelector::BestNe,
            AjSelector::WorstNe => FollowerSelector::WorstNe,
        };
        let report = solve_stackelberg(&ctx, selector, enumeration_cap)?;
        copy_channels(&report.uav_channels, uav_channels_out, capacity)?;
        *jam = report.jammer_channel;
        *loss = report.total_loss;
        Ok(())
    })
}
