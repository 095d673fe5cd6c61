use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::discretize::zoh::zoh_discretize;
use crate::{AdrcError, Result};

/// Plant description as it appears in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlantSpec {
    /// `K / (τs + 1)`.
    FirstOrder {
        #[serde(default = "one")]
        gain: f64,
        #[serde(default = "one")]
        time_constant: f64,
        #[serde(default)]
        initial_output: f64,
    },
    /// `K / sⁿ`, the virtual plant ADRC aims for.
    IntegratorChain { order: usize, gain: f64 },
    /// Continuous-time `ẋ = Ax + bu`, `y = cᵀx`.
    StateSpace {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        c: Vec<f64>,
        #[serde(default)]
        x0: Vec<f64>,
    },
    /// Averaged buck converter with an ideal inner current loop.
    Buck {
        capacitance: f64,
        resistance: f64,
        /// Recorded for documentation; does not enter the averaged model.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        input_voltage: Option<f64>,
        /// Recorded for documentation; does not enter the averaged model.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inductance: Option<f64>,
        #[serde(default)]
        initial_voltage: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// ZOH-exact linear plant with input and output disturbance ports.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePlant {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub x: DVector<f64>,
}

impl DiscretePlant {
    pub fn from_continuous(a: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>, x0: DVector<f64>, t: f64) -> Result<Self> {
        let m = a.nrows();
        if !a.is_square() || b.len() != m || c.len() != m || x0.len() != m {
            return Err(AdrcError::Dimension(format!(
                "plant matrices do not fit: A {}×{}, b {}, c {}, x0 {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len(),
                x0.len()
            )));
        }
        let (ad, bd) = zoh_discretize(&a, &b, t);
        Ok(DiscretePlant { a: ad, b: bd, c, x: x0 })
    }

    pub fn output(&self) -> f64 {
        self.c.dot(&self.x)
    }

    pub fn step(&mut self, u: f64, input_disturbance: f64) {
        self.x = &self.a * &self.x + &self.b * (u + input_disturbance);
    }
}

/// Averaged buck converter output stage,
/// `v(k+1) = v(k) + (T/C)·(i(k) − v(k)/R − i_load(k))`, with `v ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BuckPlant {
    pub capacitance: f64,
    pub resistance: f64,
    pub v: f64,
    t: f64,
}

impl BuckPlant {
    pub fn new(capacitance: f64, resistance: f64, initial_voltage: f64, t: f64) -> Result<Self> {
        if !(capacitance > 0.0 && resistance > 0.0) {
            return Err(AdrcError::Scenario("buck capacitance and resistance must be positive".into()));
        }
        Ok(BuckPlant {
            capacitance,
            resistance,
            v: initial_voltage,
            t,
        })
    }

    pub fn step(&mut self, current: f64, load: f64) {
        let dv = self.t / self.capacitance * (current - self.v / self.resistance - load);
        // The converter cannot drive the output below ground.
        self.v = (self.v + dv).max(0.0);
    }
}

/// A plant ready to simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum Plant {
    Linear(DiscretePlant),
    Buck(BuckPlant),
}

impl Plant {
    pub fn build(spec: &PlantSpec, t: f64) -> Result<Plant> {
        match spec {
            PlantSpec::FirstOrder {
                gain,
                time_constant,
                initial_output,
            } => {
                if *time_constant <= 0.0 {
                    return Err(AdrcError::Scenario("first-order time constant must be positive".into()));
                }
                let a = DMatrix::from_element(1, 1, -1.0 / time_constant);
                let b = DVector::from_element(1, gain / time_constant);
                let c = DVector::from_element(1, 1.0);
                let x0 = DVector::from_element(1, *initial_output);
                Ok(Plant::Linear(DiscretePlant::from_continuous(a, b, c, x0, t)?))
            }
            PlantSpec::IntegratorChain { order, gain } => {
                if *order == 0 {
                    return Err(AdrcError::Scenario("integrator chain needs order ≥ 1".into()));
                }
                let n = *order;
                let a = DMatrix::from_fn(n, n, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
                let mut b = DVector::zeros(n);
                b[n - 1] = *gain;
                let mut c = DVector::zeros(n);
                c[0] = 1.0;
                Ok(Plant::Linear(DiscretePlant::from_continuous(a, b, c, DVector::zeros(n), t)?))
            }
            PlantSpec::StateSpace { a, b, c, x0 } => {
                let m = a.len();
                if a.iter().any(|row| row.len() != m) {
                    return Err(AdrcError::Dimension("plant A must be square".into()));
                }
                let am = DMatrix::from_fn(m, m, |i, j| a[i][j]);
                let x0 = if x0.is_empty() { vec![0.0; m] } else { x0.clone() };
                Ok(Plant::Linear(DiscretePlant::from_continuous(
                    am,
                    DVector::from_vec(b.clone()),
                    DVector::from_vec(c.clone()),
                    DVector::from_vec(x0),
                    t,
                )?))
            }
            PlantSpec::Buck {
                capacitance,
                resistance,
                initial_voltage,
                ..
            } => Ok(Plant::Buck(BuckPlant::new(*capacitance, *resistance, *initial_voltage, t)?)),
        }
    }

    pub fn output(&self) -> f64 {
        match self {
            Plant::Linear(p) => p.output(),
            Plant::Buck(p) => p.v,
        }
    }

    /// Advances one sample. For the buck plant the input disturbance is the
    /// load current, subtracted from the commanded current.
    pub fn step(&mut self, u: f64, input_disturbance: f64, load: f64) {
        match self {
            Plant::Linear(p) => p.step(u, input_disturbance - load),
            Plant::Buck(p) => p.step(u + input_disturbance, load),
        }
    }
}
