//! Runtime ADRC controllers.
//!
//! Every realization follows the same two-phase contract per sample:
//! [`Controller::step`] consumes `r(k)` and `y(k)` and returns the unlimited
//! `u(k)`; [`Controller::commit`] then hands back the limited `u_lim(k)` that
//! actually reached the actuator. A second `step` without a `commit` (or a
//! second `commit`) is a usage error.

mod dual_feedback;
pub mod filter;
mod limiter;
mod single_tf;
mod state_space;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dual_feedback::DualFeedbackCore;
pub use limiter::{LimitFlags, LimiterSpec};
pub use single_tf::SingleTfCore;
pub use state_space::StateSpaceCore;

use crate::discretize::{tf_coefficients_closed_form, tf_coefficients_oracle, TfCoefficients, TfVariant};
use crate::tuning::{AdrcDesign, GainSet, TuningMethod};
use crate::{AdrcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Structure {
    #[serde(rename = "state_space", alias = "ss")]
    StateSpace,
    #[serde(rename = "single")]
    SingleTf,
    #[serde(rename = "dual")]
    DualFeedbackTf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signal {
    #[serde(rename = "output")]
    OutputBased,
    #[serde(rename = "error")]
    ErrorBased,
}

impl Structure {
    pub const ALL: [Structure; 3] = [Structure::StateSpace, Structure::SingleTf, Structure::DualFeedbackTf];

    pub fn as_str(self) -> &'static str {
        match self {
            Structure::StateSpace => "state_space",
            Structure::SingleTf => "single",
            Structure::DualFeedbackTf => "dual",
        }
    }

    fn tf_variant(self) -> Option<TfVariant> {
        match self {
            Structure::StateSpace => None,
            Structure::SingleTf => Some(TfVariant::SingleTf),
            Structure::DualFeedbackTf => Some(TfVariant::DualFeedback),
        }
    }
}

impl Signal {
    pub const ALL: [Signal; 2] = [Signal::OutputBased, Signal::ErrorBased];

    pub fn as_str(self) -> &'static str {
        match self {
            Signal::OutputBased => "output",
            Signal::ErrorBased => "error",
        }
    }
}

impl FromStr for Structure {
    type Err = AdrcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "state_space" | "state-space" | "ss" => Ok(Structure::StateSpace),
            "single" => Ok(Structure::SingleTf),
            "dual" => Ok(Structure::DualFeedbackTf),
            _ => Err(AdrcError::domain(
                "variant",
                format!("expected `state_space`, `single` or `dual`, got `{s}`"),
            )),
        }
    }
}

impl FromStr for Signal {
    type Err = AdrcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "output" => Ok(Signal::OutputBased),
            "error" => Ok(Signal::ErrorBased),
            _ => Err(AdrcError::domain("flavor", format!("expected `output` or `error`, got `{s}`"))),
        }
    }
}

/// One of the six implementation variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ControllerVariant {
    pub structure: Structure,
    pub signal: Signal,
}

impl ControllerVariant {
    pub fn new(structure: Structure, signal: Signal) -> Self {
        ControllerVariant { structure, signal }
    }

    pub fn all() -> Vec<ControllerVariant> {
        Structure::ALL
            .iter()
            .flat_map(|s| Signal::ALL.iter().map(move |f| ControllerVariant::new(*s, *f)))
            .collect()
    }
}

impl fmt::Display for ControllerVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.structure.as_str(), self.signal.as_str())
    }
}

/// Parses `structure:signal`, e.g. `dual:error`.
impl FromStr for ControllerVariant {
    type Err = AdrcError;

    fn from_str(s: &str) -> Result<Self> {
        let (structure, signal) = s
            .split_once(':')
            .ok_or_else(|| AdrcError::domain("variant", format!("expected `structure:flavor`, got `{s}`")))?;
        Ok(ControllerVariant::new(structure.parse()?, signal.parse()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerOptions {
    #[serde(default = "default_tuning")]
    pub tuning: TuningMethod,
    #[serde(default)]
    pub warm_start: bool,
    /// Limiter used by [`Controller::step_limited`] and, for the single-TF
    /// variants, as the default accumulator clamp.
    #[serde(default)]
    pub limiter: Option<LimiterSpec>,
    /// Overrides the single-TF accumulator clamp.
    #[serde(default)]
    pub accumulator_clamp: Option<[f64; 2]>,
}

fn default_tuning() -> TuningMethod {
    TuningMethod::DiscreteTime
}

impl Default for ControllerOptions {
    fn default() -> Self {
        ControllerOptions {
            tuning: TuningMethod::DiscreteTime,
            warm_start: false,
            limiter: None,
            accumulator_clamp: None,
        }
    }
}

impl ControllerOptions {
    pub fn with_limiter(mut self, limiter: LimiterSpec) -> Self {
        self.limiter = Some(limiter);
        self
    }

    pub fn with_tuning(mut self, tuning: TuningMethod) -> Self {
        self.tuning = tuning;
        self
    }

    pub fn warm(mut self, warm_start: bool) -> Self {
        self.warm_start = warm_start;
        self
    }

    fn accumulator_bounds(&self) -> (f64, f64) {
        match (self.accumulator_clamp, self.limiter) {
            (Some([lo, hi]), _) => (lo, hi),
            (None, Some(lim)) => lim.bounds(),
            (None, None) => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "structure", rename_all = "snake_case")]
pub enum Core {
    StateSpace(StateSpaceCore),
    Single(SingleTfCore),
    Dual(DualFeedbackCore),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Phase {
    AwaitingStep,
    AwaitingCommit,
}

/// A runtime controller: one realization plus the step/commit bookkeeping.
///
/// The whole value serializes to JSON, which is the snapshot format; a
/// restored controller continues bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Controller {
    variant: ControllerVariant,
    design: AdrcDesign,
    options: ControllerOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficients: Option<TfCoefficients>,
    core: Core,
    phase: Phase,
    started: bool,
    u_lim_prev: f64,
}

/// Transfer-function coefficients for a design: closed-form tables for
/// discrete-time tuning of order 1 and 2, the oracle otherwise.
pub fn coefficients_for(design: &AdrcDesign, variant: TfVariant, tuning: TuningMethod) -> Result<TfCoefficients> {
    if tuning == TuningMethod::DiscreteTime && design.order <= 2 {
        tf_coefficients_closed_form(design, variant)
    } else {
        let gains = GainSet::for_method(design, tuning)?;
        tf_coefficients_oracle(design, &gains.k, &gains.l, variant)
    }
}

impl Controller {
    pub fn new(design: &AdrcDesign, variant: ControllerVariant, options: ControllerOptions) -> Result<Self> {
        design.validate()?;
        if let Some(lim) = &options.limiter {
            lim.validate()?;
        }
        let (core, coefficients) = match variant.structure.tf_variant() {
            None => {
                let gains = GainSet::for_method(design, options.tuning)?;
                (
                    Core::StateSpace(StateSpaceCore::new(design, variant.signal, &gains.k, &gains.l)?),
                    None,
                )
            }
            Some(tf) => {
                let coeffs = coefficients_for(design, tf, options.tuning)?;
                (tf_core(&coeffs, variant.signal, &options)?, Some(coeffs))
            }
        };
        Ok(Controller {
            variant,
            design: *design,
            options,
            coefficients,
            core,
            phase: Phase::AwaitingStep,
            started: false,
            u_lim_prev: 0.0,
        })
    }

    /// Transfer-function controller from externally supplied coefficients.
    pub fn from_coefficients(coeffs: &TfCoefficients, signal: Signal, options: ControllerOptions) -> Result<Self> {
        coeffs.design.validate()?;
        if let Some(lim) = &options.limiter {
            lim.validate()?;
        }
        let structure = match coeffs.variant {
            TfVariant::SingleTf => Structure::SingleTf,
            TfVariant::DualFeedback => Structure::DualFeedbackTf,
        };
        Ok(Controller {
            variant: ControllerVariant::new(structure, signal),
            design: coeffs.design,
            core: tf_core(coeffs, signal, &options)?,
            options,
            coefficients: Some(coeffs.clone()),
            phase: Phase::AwaitingStep,
            started: false,
            u_lim_prev: 0.0,
        })
    }

    pub fn variant(&self) -> ControllerVariant {
        self.variant
    }

    pub fn design(&self) -> &AdrcDesign {
        &self.design
    }

    pub fn options(&self) -> &ControllerOptions {
        &self.options
    }

    pub fn coefficients(&self) -> Option<&TfCoefficients> {
        self.coefficients.as_ref()
    }

    pub fn core(&self) -> &Core {
        &self.core
    }

    /// Observer estimate `x̂(k)` for the state-space variants.
    pub fn observer_state(&self) -> Option<&[f64]> {
        match &self.core {
            Core::StateSpace(ss) => Some(ss.xhat.as_slice()),
            _ => None,
        }
    }

    /// Last committed `u_lim`.
    pub fn last_committed(&self) -> f64 {
        self.u_lim_prev
    }

    /// Computes `u(k)` from reference and measurement.
    ///
    /// Error-based variants form `e = r − y` themselves.
    pub fn step(&mut self, r: f64, y: f64) -> Result<f64> {
        if self.phase == Phase::AwaitingCommit {
            return Err(AdrcError::Usage("step called again before commit"));
        }
        let v = match self.variant.signal {
            Signal::OutputBased => y,
            Signal::ErrorBased => r - y,
        };
        if !self.started {
            self.started = true;
            if self.options.warm_start {
                match &mut self.core {
                    Core::StateSpace(c) => c.warm_start(v),
                    Core::Single(c) => c.warm_start(r),
                    Core::Dual(c) => c.warm_start(v),
                }
            }
        }
        let u = match &mut self.core {
            Core::StateSpace(c) => c.output(r, v),
            Core::Single(c) => c.output(r, v),
            Core::Dual(c) => c.output(r, v),
        };
        self.phase = Phase::AwaitingCommit;
        Ok(u)
    }

    /// Error-based stepping on a precomputed control error.
    pub fn step_error(&mut self, e: f64) -> Result<f64> {
        if self.variant.signal != Signal::ErrorBased {
            return Err(AdrcError::Usage("step_error needs an error-based controller"));
        }
        self.step(e, 0.0)
    }

    /// Feeds the limited control signal of this sample back.
    ///
    /// A no-op for the single-TF variants apart from bookkeeping.
    pub fn commit(&mut self, u_lim: f64) -> Result<()> {
        if self.phase == Phase::AwaitingStep {
            return Err(AdrcError::Usage("commit called without a pending step"));
        }
        match &mut self.core {
            Core::StateSpace(c) => c.commit(u_lim),
            Core::Single(_) => {}
            Core::Dual(c) => c.commit(u_lim),
        }
        self.u_lim_prev = u_lim;
        self.phase = Phase::AwaitingStep;
        Ok(())
    }

    /// Steps, applies the configured limiter and commits its output.
    pub fn step_limited(&mut self, r: f64, y: f64) -> Result<(f64, f64, LimitFlags)> {
        let u = self.step(r, y)?;
        let (u_lim, flags) = match &self.options.limiter {
            Some(lim) => lim.apply(u, self.u_lim_prev, self.design.sample_time),
            None => (u, LimitFlags::default()),
        };
        self.commit(u_lim)?;
        Ok((u, u_lim, flags))
    }

    pub fn snapshot_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| AdrcError::Io(e.to_string()))
    }

    pub fn from_snapshot_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| AdrcError::Io(format!("controller snapshot: {e}")))
    }
}

fn tf_core(coeffs: &TfCoefficients, signal: Signal, options: &ControllerOptions) -> Result<Core> {
    Ok(match coeffs.variant {
        TfVariant::SingleTf => Core::Single(SingleTfCore::new(coeffs, signal, options.accumulator_bounds())?),
        TfVariant::DualFeedback => Core::Dual(DualFeedbackCore::new(coeffs, signal)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design() -> AdrcDesign {
        AdrcDesign::new(1, 1.0, 10.0, 10.0, 0.001).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        for v in ControllerVariant::all() {
            let mut c = Controller::new(&design(), v, ControllerOptions::default()).unwrap();
            for _ in 0..10 {
                let u = c.step(0.0, 0.0).unwrap();
                assert_eq!(u, 0.0, "{v}");
                c.commit(u).unwrap();
            }
        }
    }

    #[test]
    fn first_output_based_step_is_feedforward() {
        let mut c = Controller::new(
            &design(),
            ControllerVariant::new(Structure::StateSpace, Signal::OutputBased),
            ControllerOptions::default(),
        )
        .unwrap();
        let u = c.step(1.0, 0.0).unwrap();
        assert!((u - 9.950_166_250_831_946).abs() < 1e-12);
    }

    #[test]
    fn dual_first_step_follows_signal_flow() {
        let d = design();
        let mut c = Controller::new(
            &d,
            ControllerVariant::new(Structure::DualFeedbackTf, Signal::OutputBased),
            ControllerOptions::default(),
        )
        .unwrap();
        let coeffs = c.coefficients().unwrap().clone();
        let (r, y) = (0.7, 0.2);
        let u = c.step(r, y).unwrap();
        let expected = coeffs.k1_over_b0.unwrap() * r - coeffs.beta[0] * y;
        assert!((u - expected).abs() < 1e-12);
    }

    #[test]
    fn double_step_and_double_commit_are_errors() {
        let mut c = Controller::new(
            &design(),
            ControllerVariant::new(Structure::DualFeedbackTf, Signal::ErrorBased),
            ControllerOptions::default(),
        )
        .unwrap();
        assert!(matches!(c.commit(0.0), Err(AdrcError::Usage(_))));
        c.step(1.0, 0.0).unwrap();
        assert!(matches!(c.step(1.0, 0.0), Err(AdrcError::Usage(_))));
        c.commit(0.0).unwrap();
        assert!(matches!(c.commit(0.0), Err(AdrcError::Usage(_))));
    }

    #[test]
    fn step_error_only_for_error_based() {
        let mut c = Controller::new(
            &design(),
            ControllerVariant::new(Structure::StateSpace, Signal::OutputBased),
            ControllerOptions::default(),
        )
        .unwrap();
        assert!(c.step_error(1.0).is_err());
    }

    #[test]
    fn variant_strings() {
        for v in ControllerVariant::all() {
            assert_eq!(v.to_string().parse::<ControllerVariant>().unwrap(), v);
        }
        assert!("dual".parse::<ControllerVariant>().is_err());
        assert!("triple:error".parse::<ControllerVariant>().is_err());
    }

    #[test]
    fn single_tf_accumulator_respects_limiter_bounds() {
        let opts = ControllerOptions::default().with_limiter(LimiterSpec::magnitude(-0.5, 0.5));
        let mut c = Controller::new(&design(), ControllerVariant::new(Structure::SingleTf, Signal::ErrorBased), opts)
            .unwrap();
        for _ in 0..50 {
            let u = c.step(10.0, 0.0).unwrap();
            assert!((-0.5..=0.5).contains(&u));
            c.commit(u).unwrap();
        }
    }

    #[test]
    fn state_space_error_based_without_correction() {
        let d = design();
        let mut ss = StateSpaceCore::new(&d, Signal::ErrorBased, &[5.0], &[0.0, 0.0]).unwrap();
        let eso = crate::discretize::build_eso(&d, &[0.0, 0.0]).unwrap();
        let mut x = nalgebra::DVector::zeros(2);
        for _ in 0..5 {
            ss.output(0.0, 0.0);
            ss.commit(1.0);
        }
        // first update sees u_lim(−1) = 0
        for _ in 0..4 {
            x = &eso.a_d * x - &eso.b_d;
        }
        assert!((ss.xhat.clone() - x).amax() < 1e-15);
    }
}
