use serde::{Deserialize, Serialize};

use super::Signal;
use crate::discretize::{TfCoefficients, TfVariant};
use crate::{AdrcError, Result};

/// `C_FBy` and `z⁻¹·C_FBu` superposed on one transposed direct-form-II
/// delay line of `n + 1` states.
///
/// With `v = −y` (output-based) or `v = e` (error-based) the output is
/// `u = ff·r + β₀·v + w₁`, and after `u_lim` is known every state advances
/// as `wᵢ ← wᵢ₊₁ + βᵢ·v + γᵢ₋₁·u_lim − αᵢ·(u − ff·r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualFeedbackCore {
    pub(crate) signal: Signal,
    pub(crate) alpha: Vec<f64>,
    pub(crate) beta: Vec<f64>,
    pub(crate) gamma: Vec<f64>,
    pub(crate) ff: f64,
    pub(crate) w: Vec<f64>,
    pending: Option<(f64, f64)>,
}

impl DualFeedbackCore {
    pub fn new(coeffs: &TfCoefficients, signal: Signal) -> Result<Self> {
        if coeffs.variant != TfVariant::DualFeedback {
            return Err(AdrcError::domain("variant", "dual-feedback realization needs dual coefficients"));
        }
        coeffs.check_shape()?;
        let ff = match signal {
            Signal::OutputBased => coeffs.k1_over_b0.unwrap_or(0.0),
            Signal::ErrorBased => 0.0,
        };
        Ok(DualFeedbackCore {
            signal,
            alpha: coeffs.alpha.clone(),
            beta: coeffs.beta.clone(),
            gamma: coeffs.gamma.clone(),
            ff,
            w: vec![0.0; coeffs.alpha.len()],
            pending: None,
        })
    }

    fn input(&self, v: f64) -> f64 {
        match self.signal {
            Signal::OutputBased => -v,
            Signal::ErrorBased => v,
        }
    }

    /// `v` is `y` for output-based and `e` for error-based control.
    pub fn output(&mut self, r: f64, v: f64) -> f64 {
        let v = self.input(v);
        let o = self.beta[0] * v + self.w[0];
        self.pending = Some((v, o));
        self.ff * r + o
    }

    pub fn commit(&mut self, u_lim: f64) {
        let Some((v, o)) = self.pending.take() else {
            return;
        };
        let m = self.w.len();
        for i in 0..m {
            let next = if i + 1 < m { self.w[i + 1] } else { 0.0 };
            let beta = self.beta.get(i + 1).copied().unwrap_or(0.0);
            self.w[i] = next + beta * v + self.gamma[i] * u_lim - self.alpha[i] * o;
        }
    }

    /// Delay line at rest on a constant first input with `u_lim = 0`.
    pub fn warm_start(&mut self, v0: f64) {
        let v = self.input(v0);
        let o = v * self.beta.iter().sum::<f64>() / (1.0 + self.alpha.iter().sum::<f64>());
        let mut acc = 0.0;
        for i in (0..self.w.len()).rev() {
            let beta = self.beta.get(i + 1).copied().unwrap_or(0.0);
            acc += beta * v - self.alpha[i] * o;
            self.w[i] = acc;
        }
    }
}
