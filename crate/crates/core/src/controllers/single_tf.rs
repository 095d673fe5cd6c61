use serde::{Deserialize, Serialize};

use super::filter::Df2t;
use super::Signal;
use crate::discretize::{TfCoefficients, TfVariant};
use crate::{AdrcError, Result};

/// Prefilter, incremental feedback filter `ΔC_FB` and a clamped accumulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleTfCore {
    pub(crate) signal: Signal,
    pub(crate) prefilter: Option<Df2t>,
    pub(crate) delta: Df2t,
    pub(crate) accumulator: f64,
    pub(crate) clamp: (f64, f64),
}

impl SingleTfCore {
    pub fn new(coeffs: &TfCoefficients, signal: Signal, clamp: (f64, f64)) -> Result<Self> {
        if coeffs.variant != TfVariant::SingleTf {
            return Err(AdrcError::domain("variant", "single-TF realization needs single coefficients"));
        }
        coeffs.check_shape()?;
        if clamp.0.is_nan() || clamp.1.is_nan() || clamp.0 > clamp.1 {
            return Err(AdrcError::domain("accumulator_clamp", format!("invalid bounds {clamp:?}")));
        }
        let prefilter = match signal {
            Signal::OutputBased => {
                let b0 = coeffs.beta[0];
                let num: Vec<f64> = coeffs.gamma.iter().map(|g| g / b0).collect();
                let den: Vec<f64> = coeffs.beta[1..].iter().map(|b| b / b0).collect();
                Some(Df2t::new(&num, &den))
            }
            Signal::ErrorBased => None,
        };
        Ok(SingleTfCore {
            signal,
            prefilter,
            delta: Df2t::new(&coeffs.beta, &coeffs.alpha),
            accumulator: 0.0,
            clamp,
        })
    }

    /// `v` is `y` for output-based and `e` for error-based control.
    pub fn output(&mut self, r: f64, v: f64) -> f64 {
        let x = match &mut self.prefilter {
            Some(pf) => pf.step(r) - v,
            None => v,
        };
        let d = self.delta.step(x);
        self.accumulator = (self.accumulator + d).clamp(self.clamp.0, self.clamp.1);
        self.accumulator
    }

    /// Charges the prefilter to its steady state for `r0`.
    pub fn warm_start(&mut self, r0: f64) {
        if let Some(pf) = &mut self.prefilter {
            pf.settle_at(r0);
        }
    }

    pub fn prefilter_dc_gain(&self) -> Option<f64> {
        self.prefilter.as_ref().map(Df2t::dc_gain)
    }
}
