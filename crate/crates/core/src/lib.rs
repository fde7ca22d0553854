//! Multi-UAV cooperative anti-jamming channel selection as a jammer-led
//! Stackelberg game.
//!
//! - [`scenario`]: geometry, channel gains and scenario files.
//! - [`game`]: losses, utilities and the potential of one period.
//! - [`sla`]: stochastic learning automata for the jammer and the UAVs.
//! - [`oracle`]: exhaustive equilibrium enumeration and baselines.
//! - [`harness`]: experiment specs, sweeps and CSV/JSON output.
//!
//! Random streams come from ChaCha8 (see [`rng`]), so a seed reproduces a run
//! on every platform.

pub mod error;
pub mod float;
pub mod game;
pub mod harness;
pub mod oracle;
pub mod rng;
pub mod scenario;
pub mod sla;

pub use error::{Error, Result, Violation};
pub use game::{JointAction, PeriodContext};
pub use scenario::{load_scenario, validate_scenario, Scenario};
pub use sla::{run_all_periods, LearningConfig, MixedStrategy, RunResult};
