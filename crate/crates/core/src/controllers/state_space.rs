use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::Signal;
use crate::discretize::build_eso;
use crate::tuning::AdrcDesign;
use crate::Result;

/// Current observer plus state feedback, stepped directly on `x̂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpaceCore {
    pub(crate) signal: Signal,
    pub(crate) a_eso: DMatrix<f64>,
    pub(crate) b_eso: DVector<f64>,
    pub(crate) l: DVector<f64>,
    /// `[kᵀ 1]ᵀ / b₀`
    pub(crate) p: DVector<f64>,
    pub(crate) k1_over_b0: f64,
    pub(crate) xhat: DVector<f64>,
    pub(crate) u_lim_prev: f64,
}

impl StateSpaceCore {
    pub fn new(design: &AdrcDesign, signal: Signal, k: &[f64], l: &[f64]) -> Result<Self> {
        let eso = build_eso(design, l)?;
        let n = design.order;
        let p = DVector::from_fn(n + 1, |i, _| if i < n { k[i] } else { 1.0 }) / design.b0;
        Ok(StateSpaceCore {
            signal,
            a_eso: eso.a_eso,
            b_eso: eso.b_eso,
            l: eso.l,
            p,
            k1_over_b0: k[0] / design.b0,
            xhat: DVector::zeros(n + 1),
            u_lim_prev: 0.0,
        })
    }

    /// `v` is `y` for output-based and `e` for error-based control.
    pub fn output(&mut self, r: f64, v: f64) -> f64 {
        let fed_back = match self.signal {
            Signal::OutputBased => self.u_lim_prev,
            Signal::ErrorBased => -self.u_lim_prev,
        };
        self.xhat = &self.a_eso * &self.xhat + &self.b_eso * fed_back + &self.l * v;
        match self.signal {
            Signal::OutputBased => self.k1_over_b0 * r - self.p.dot(&self.xhat),
            Signal::ErrorBased => self.p.dot(&self.xhat),
        }
    }

    pub fn commit(&mut self, u_lim: f64) {
        self.u_lim_prev = u_lim;
    }

    /// `x̂(−1) = v₀·e₁`: the observer at rest on a constant first input.
    pub fn warm_start(&mut self, v0: f64) {
        self.xhat.fill(0.0);
        self.xhat[0] = v0;
    }
}
