use super::plant::PlantSpec;
use super::scenario::{ControllerSpec, Event, NoiseSpec, Scenario, SetpointFilter};
use crate::controllers::{LimiterSpec, Signal, Structure};
use crate::tuning::TuningMethod;

pub const BUCK_SAMPLE_TIME: f64 = 2e-5;
pub const BUCK_CAPACITANCE: f64 = 100e-6;
pub const BUCK_OVERLOAD: f64 = 8.0;
pub const BUCK_FULL_LOAD: f64 = 3.0;
pub const BUCK_NOISE_SEED: u64 = 20_220_509;

/// Voltage control of a 24 V → 5…10 V buck converter through a current
/// command limited to [0, 6] A and ±20 A/ms.
///
/// Startup at 5 V with only the 100 Ω base load, full load (3 A) at 4 ms,
/// setpoint change to 10 V at 6 ms and an 8 A overload from 10 to 12 ms that
/// the current limit cannot cover.
pub fn make_buck_scenario() -> Scenario {
    Scenario {
        name: "buck".into(),
        duration: 0.04,
        sample_time: BUCK_SAMPLE_TIME,
        delay_samples: 1,
        divergence_guard: None,
        noise: Some(NoiseSpec {
            sigma: 0.02,
            seed: BUCK_NOISE_SEED,
        }),
        setpoint_filter: Some(SetpointFilter { time_constant: 750e-6 }),
        limiter: Some(LimiterSpec::magnitude(0.0, 6.0).with_rate(20_000.0)),
        plant: PlantSpec::Buck {
            capacitance: BUCK_CAPACITANCE,
            resistance: 100.0,
            input_voltage: Some(24.0),
            inductance: Some(33e-6),
            initial_voltage: 0.0,
        },
        controller: ControllerSpec {
            structure: Structure::DualFeedbackTf,
            signal: Signal::ErrorBased,
            tuning: TuningMethod::DiscreteTime,
            warm_start: true,
            n: 1,
            b0: 1e4,
            omega_cl: 4000.0,
            k_eso: 5.0,
            accumulator_clamp: None,
        },
        events: vec![
            Event::setpoint(0.0, 5.0),
            Event::load(0.004, BUCK_FULL_LOAD),
            Event::setpoint(0.006, 10.0),
            Event::load(0.010, BUCK_OVERLOAD),
            Event::load(0.012, BUCK_FULL_LOAD),
        ],
    }
}
