use std::path::Path;

use serde::{Deserialize, Serialize};

use super::plant::PlantSpec;
use crate::controllers::{Controller, ControllerOptions, ControllerVariant, LimiterSpec, Signal, Structure};
use crate::tuning::{AdrcDesign, TuningMethod};
use crate::{AdrcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

/// First-order low-pass on the reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetpointFilter {
    pub time_constant: f64,
}

/// From `time` on, every given quantity holds the new value.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setpoint: Option<f64>,
    /// Load current of the buck plant, or a disturbance subtracted from the
    /// input of linear plants.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_disturbance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_disturbance: Option<f64>,
}

impl Event {
    pub fn setpoint(time: f64, value: f64) -> Self {
        Event { time, setpoint: Some(value), ..Default::default() }
    }

    pub fn load(time: f64, value: f64) -> Self {
        Event { time, load: Some(value), ..Default::default() }
    }

    pub fn input_disturbance(time: f64, value: f64) -> Self {
        Event { time, input_disturbance: Some(value), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerSpec {
    pub structure: Structure,
    pub signal: Signal,
    #[serde(default = "discrete_time")]
    pub tuning: TuningMethod,
    #[serde(default)]
    pub warm_start: bool,
    pub n: usize,
    pub b0: f64,
    pub omega_cl: f64,
    pub k_eso: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accumulator_clamp: Option<[f64; 2]>,
}

fn discrete_time() -> TuningMethod {
    TuningMethod::DiscreteTime
}

fn one_sample() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    /// Simulated time in seconds; the trace has `duration/T + 1` samples.
    pub duration: f64,
    pub sample_time: f64,
    /// Samples between computing `u_lim(k)` and the plant receiving it.
    #[serde(default = "one_sample")]
    pub delay_samples: usize,
    /// `|y|` beyond this aborts the run; defaults to 10⁶ times the largest
    /// reference magnitude (at least 10⁶).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence_guard: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setpoint_filter: Option<SetpointFilter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limiter: Option<LimiterSpec>,
    pub plant: PlantSpec,
    pub controller: ControllerSpec,
    #[serde(default)]
    pub events: Vec<Event>,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| AdrcError::Scenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| AdrcError::Scenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AdrcError::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| AdrcError::Scenario(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_time.is_finite() && self.sample_time > 0.0) {
            return Err(AdrcError::Scenario(format!("sample_time must be positive, got {}", self.sample_time)));
        }
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(AdrcError::Scenario(format!("duration must be non-negative, got {}", self.duration)));
        }
        if let Some(n) = &self.noise {
            if n.sigma.is_nan() || n.sigma < 0.0 {
                return Err(AdrcError::Scenario(format!("noise sigma must be non-negative, got {}", n.sigma)));
            }
        }
        if let Some(f) = &self.setpoint_filter {
            if f.time_constant.is_nan() || f.time_constant <= 0.0 {
                return Err(AdrcError::Scenario("setpoint filter time constant must be positive".into()));
            }
        }
        if let Some(l) = &self.limiter {
            l.validate()?;
        }
        for pair in self.events.windows(2) {
            if pair[1].time < pair[0].time {
                return Err(AdrcError::Scenario(format!(
                    "events out of order: {} s listed after {} s",
                    pair[1].time, pair[0].time
                )));
            }
        }
        if self.events.iter().any(|e| e.time.is_nan() || e.time < 0.0) {
            return Err(AdrcError::Scenario("event times must be non-negative".into()));
        }
        self.design()?;
        Ok(())
    }

    pub fn samples(&self) -> usize {
        (self.duration / self.sample_time).round() as usize + 1
    }

    pub fn design(&self) -> Result<AdrcDesign> {
        let c = &self.controller;
        AdrcDesign::new(c.n, c.b0, c.omega_cl, c.k_eso, self.sample_time)
    }

    pub fn variant(&self) -> ControllerVariant {
        ControllerVariant::new(self.controller.structure, self.controller.signal)
    }

    pub fn controller_options(&self) -> ControllerOptions {
        ControllerOptions {
            tuning: self.controller.tuning,
            warm_start: self.controller.warm_start,
            limiter: self.limiter,
            accumulator_clamp: self.controller.accumulator_clamp,
        }
    }

    pub fn build_controller(&self) -> Result<Controller> {
        self.build_variant(self.variant())
    }

    /// The scenario's controller with a different structure/signal.
    pub fn build_variant(&self, variant: ControllerVariant) -> Result<Controller> {
        Controller::new(&self.design()?, variant, self.controller_options())
    }

    pub fn with_variant(&self, variant: ControllerVariant) -> Scenario {
        let mut s = self.clone();
        s.controller.structure = variant.structure;
        s.controller.signal = variant.signal;
        s
    }

    /// Sample index at which an event time takes effect.
    pub fn event_sample(&self, time: f64) -> usize {
        ((time / self.sample_time) - 1e-9).ceil().max(0.0) as usize
    }

    pub fn reference_scale(&self) -> f64 {
        self.events
            .iter()
            .filter_map(|e| e.setpoint)
            .fold(1.0, |m, r| m.max(r.abs()))
    }

    /// True when the limiter can bite on this scenario.
    pub fn is_saturating(&self) -> bool {
        self.limiter.is_some_and(|l| l.is_saturating())
    }
}
