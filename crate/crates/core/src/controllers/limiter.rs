use serde::{Deserialize, Serialize};

use crate::{AdrcError, Result};

/// Magnitude and slew-rate bounds on the control signal.
///
/// A missing bound is disabled. The rate bound is given per second and
/// applied as `±rate_max·T` per sample.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LimiterSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_max: Option<f64>,
}

/// Which bounds were active on one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LimitFlags {
    pub magnitude: bool,
    pub rate: bool,
}

impl LimitFlags {
    pub fn any(self) -> bool {
        self.magnitude || self.rate
    }
}

impl LimiterSpec {
    pub fn magnitude(u_min: f64, u_max: f64) -> Self {
        LimiterSpec {
            u_min: Some(u_min),
            u_max: Some(u_max),
            rate_max: None,
        }
    }

    pub fn with_rate(mut self, rate_max: f64) -> Self {
        self.rate_max = Some(rate_max);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("u_min", self.u_min), ("u_max", self.u_max), ("rate_max", self.rate_max)] {
            if let Some(v) = v {
                if v.is_nan() {
                    return Err(AdrcError::domain(name, "must not be NaN"));
                }
            }
        }
        if let (Some(lo), Some(hi)) = (self.u_min, self.u_max) {
            if lo >= hi {
                return Err(AdrcError::domain("u_min", format!("lower bound {lo} must be below upper bound {hi}")));
            }
        }
        if let Some(r) = self.rate_max {
            if r < 0.0 {
                return Err(AdrcError::domain("rate_max", format!("must be non-negative, got {r}")));
            }
        }
        Ok(())
    }

    pub fn is_saturating(&self) -> bool {
        self.u_min.is_some() || self.u_max.is_some() || self.rate_max.is_some()
    }

    /// Magnitude bounds with disabled sides as infinities.
    pub fn bounds(&self) -> (f64, f64) {
        (
            self.u_min.unwrap_or(f64::NEG_INFINITY),
            self.u_max.unwrap_or(f64::INFINITY),
        )
    }

    /// Rate clamp against the previous limited value, then magnitude clamp.
    pub fn apply(&self, u: f64, u_lim_prev: f64, sample_time: f64) -> (f64, LimitFlags) {
        let mut flags = LimitFlags::default();
        let mut out = u;
        if let Some(rate) = self.rate_max {
            let step = rate * sample_time;
            if out > u_lim_prev + step {
                out = u_lim_prev + step;
                flags.rate = true;
            } else if out < u_lim_prev - step {
                out = u_lim_prev - step;
                flags.rate = true;
            }
        }
        let (lo, hi) = self.bounds();
        if out > hi {
            out = hi;
            flags.magnitude = true;
        } else if out < lo {
            out = lo;
            flags.magnitude = true;
        }
        (out, flags)
    }
}
