//! Fixed-step closed-loop simulation.
//!
//! Per sample `k` the harness applies due events, filters the reference,
//! measures `y(k)` (plus noise), steps the controller, limits `u(k)`,
//! commits `u_lim(k)` and advances the plant with `u_lim(k − delay)`.

mod buck;
pub mod metrics;
mod noise;
mod plant;
mod runner;
mod scenario;
mod trace;

pub use buck::{make_buck_scenario, BUCK_FULL_LOAD, BUCK_NOISE_SEED, BUCK_OVERLOAD, BUCK_SAMPLE_TIME};
pub use metrics::{compare_traces, constant_reference_windows, summarize, TraceDiff, TraceSummary};
pub use noise::{add_noise, NoiseSource};
pub use plant::{BuckPlant, DiscretePlant, Plant, PlantSpec};
pub use runner::{run_keeping_controller, run_lockstep, run_scenario, run_with, RunOptions};
pub use scenario::{ControllerSpec, Event, NoiseSpec, Scenario, SetpointFilter};
pub use trace::{Trace, TRACE_HEADER};
