//! Closed-form transfer-function coefficients for first- and second-order
//! ADRC with discrete-time bandwidth tuning.
//!
//! All polynomials are in ascending powers of `z⁻¹` with monic denominators.
//!
//! * Single TF: `C_FB = Σβᵢz⁻ⁱ / ((1 + Σαᵢz⁻ⁱ)(1 − z⁻¹))` and
//!   `C_PF = Σγᵢz⁻ⁱ / Σβᵢz⁻ⁱ`, with `n` α's, `n + 1` β's, `n + 2` γ's.
//! * Dual feedback: `C_FBy = Σβᵢz⁻ⁱ / (1 + Σαᵢz⁻ⁱ)` and
//!   `C_FBu = z⁻¹ Σγᵢz⁻ⁱ / (1 + Σαᵢz⁻ⁱ)`, with `n + 1` α's, `n + 1` β's,
//!   `n + 1` γ's and the feedforward gain `k₁/b₀`.
//!
//! The formulas are evaluated exactly as printed, in the `z_CL`/`z_ESO`
//! parameterization, so results are reproducible bit for bit.

use serde::{Deserialize, Serialize};

use crate::tuning::{dt_pole_locations, AdrcDesign};
use crate::{AdrcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TfVariant {
    #[serde(rename = "single")]
    SingleTf,
    #[serde(rename = "dual")]
    DualFeedback,
}

impl TfVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            TfVariant::SingleTf => "single",
            TfVariant::DualFeedback => "dual",
        }
    }
}

impl std::str::FromStr for TfVariant {
    type Err = AdrcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(TfVariant::SingleTf),
            "dual" => Ok(TfVariant::DualFeedback),
            other => Err(AdrcError::domain("variant", format!("expected `single` or `dual`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfCoefficients {
    pub design: AdrcDesign,
    pub variant: TfVariant,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1_over_b0: Option<f64>,
}

impl TfCoefficients {
    /// Checks that the vector lengths fit the variant and order.
    pub fn check_shape(&self) -> Result<()> {
        let n = self.design.order;
        let (na, ng) = match self.variant {
            TfVariant::SingleTf => (n, n + 2),
            TfVariant::DualFeedback => (n + 1, n + 1),
        };
        let ok = self.alpha.len() == na
            && self.beta.len() == n + 1
            && self.gamma.len() == ng
            && (self.variant == TfVariant::SingleTf || self.k1_over_b0.is_some());
        if ok {
            Ok(())
        } else {
            Err(AdrcError::Dimension(format!(
                "{} coefficients for n={n} need {na} α, {} β, {ng} γ{}; got {}, {}, {}",
                self.variant.as_str(),
                n + 1,
                if self.variant == TfVariant::DualFeedback { " and k1_over_b0" } else { "" },
                self.alpha.len(),
                self.beta.len(),
                self.gamma.len(),
            )))
        }
    }

    /// Largest deviation from `other`, relative to the magnitude of each
    /// reference entry, with `abs_floor` as the smallest denominator.
    pub fn max_relative_deviation(&self, other: &TfCoefficients, abs_floor: f64) -> f64 {
        let pairs = self
            .alpha
            .iter()
            .zip(&other.alpha)
            .chain(self.beta.iter().zip(&other.beta))
            .chain(self.gamma.iter().zip(&other.gamma))
            .chain(self.k1_over_b0.iter().zip(&other.k1_over_b0));
        let mut worst: f64 = 0.0;
        for (a, b) in pairs {
            worst = worst.max((a - b).abs() / b.abs().max(abs_floor));
        }
        let same_shape = self.alpha.len() == other.alpha.len()
            && self.beta.len() == other.beta.len()
            && self.gamma.len() == other.gamma.len()
            && self.k1_over_b0.is_some() == other.k1_over_b0.is_some();
        if same_shape { worst } else { f64::INFINITY }
    }

    /// True when every entry agrees within `rel` relative or `abs` absolute.
    pub fn agrees_with(&self, other: &TfCoefficients, rel: f64, abs: f64) -> bool {
        let close = |a: &[f64], b: &[f64]| {
            a.len() == b.len()
                && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= abs.max(rel * y.abs()))
        };
        close(&self.alpha, &other.alpha)
            && close(&self.beta, &other.beta)
            && close(&self.gamma, &other.gamma)
            && match (self.k1_over_b0, other.k1_over_b0) {
                (Some(a), Some(b)) => close(&[a], &[b]),
                (None, None) => true,
                _ => false,
            }
    }
}

/// Coefficient vectors without the design they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVectors {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub k1_over_b0: Option<f64>,
}

/// Coefficient tables for first- and second-order ADRC.
pub fn tf_coefficients_closed_form(design: &AdrcDesign, variant: TfVariant) -> Result<TfCoefficients> {
    design.validate()?;
    let poles = dt_pole_locations(design);
    let v = coefficients_from_poles(
        design.order,
        variant,
        poles.z_cl,
        poles.z_eso,
        design.b0,
        design.sample_time,
    )?;
    Ok(TfCoefficients {
        design: *design,
        variant,
        alpha: v.alpha,
        beta: v.beta,
        gamma: v.gamma,
        k1_over_b0: v.k1_over_b0,
    })
}

/// The table formulas for explicit pole locations (including limits such as
/// `z_CL = z_ESO = 1` that no valid design reaches).
pub fn coefficients_from_poles(
    order: usize,
    variant: TfVariant,
    z_cl: f64,
    z_eso: f64,
    b0: f64,
    t: f64,
) -> Result<CoefficientVectors> {
    let (zc, ze) = (z_cl, z_eso);
    match order {
        1 => {
            let s = 1.0 / (b0 * t);
            let beta = vec![
                s * (zc * ze * ze - 2.0 * ze - zc + 2.0),
                s * (2.0 * zc * ze - 2.0 * zc * ze * ze + ze * ze - 1.0),
            ];
            Ok(match variant {
                TfVariant::SingleTf => CoefficientVectors {
                    alpha: vec![-zc * ze * ze],
                    beta,
                    gamma: vec![
                        (1.0 - zc) / (b0 * t),
                        -2.0 * ze * (1.0 - zc) / (b0 * t),
                        ze * ze * (1.0 - zc) / (b0 * t),
                    ],
                    k1_over_b0: None,
                },
                TfVariant::DualFeedback => CoefficientVectors {
                    alpha: vec![-2.0 * ze, ze * ze],
                    beta,
                    gamma: vec![zc * ze * ze - 2.0 * ze + 1.0, ze * ze - zc * ze * ze],
                    k1_over_b0: Some((1.0 - zc) / (b0 * t)),
                },
            })
        }
        2 => {
            let s = 1.0 / (b0 * t * t);
            let p = (1.0 + zc).powi(2) * (1.0 + ze).powi(3);
            let zc2 = zc * zc;
            let ze2 = ze * ze;
            let ze3 = ze2 * ze;
            let beta = vec![
                s * (0.25 * p - 2.0 * (zc2 * ze3 + 2.0 * zc + 3.0 * ze - 2.0)),
                s * (-p + 2.0 * (1.0 + zc).powi(2) + 6.0 * (zc2 * ze3 + 2.0 * zc * ze + ze2 + ze - 1.0)),
                s * (-0.25 * p + 2.0 * (-2.0 * zc2 * ze3 + 3.0 * zc2 * ze2 + 2.0 * zc * ze3 + 1.0)),
            ];
            let k1 = (1.0 - zc).powi(2) / (b0 * t * t);
            Ok(match variant {
                TfVariant::SingleTf => CoefficientVectors {
                    alpha: vec![-0.125 * p + zc2 * ze3 + 1.0, zc2 * ze3],
                    beta,
                    gamma: vec![k1, -3.0 * ze * k1, 3.0 * ze2 * k1, -ze3 * k1],
                    k1_over_b0: None,
                },
                TfVariant::DualFeedback => CoefficientVectors {
                    alpha: vec![-3.0 * ze, 3.0 * ze2, -ze3],
                    beta,
                    gamma: vec![
                        0.125 * p - ze * (zc2 * ze2 + 3.0),
                        -0.125 * p + 3.0 * ze2 + 1.0,
                        ze3 * (zc2 - 1.0),
                    ],
                    k1_over_b0: Some(k1),
                },
            })
        }
        n => Err(AdrcError::UnsupportedOrder(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_gamma0() {
        let d = AdrcDesign::new(1, 1.0, 10.0, 10.0, 0.001).unwrap();
        let c = tf_coefficients_closed_form(&d, TfVariant::SingleTf).unwrap();
        assert!((c.gamma[0] - 9.950_166_250_831_946).abs() < 1e-12);
        c.check_shape().unwrap();
    }

    #[test]
    fn dual_gamma0_vanishes_in_the_limit() {
        let v = coefficients_from_poles(1, TfVariant::DualFeedback, 1.0, 1.0, 1.0, 0.01).unwrap();
        assert_eq!(v.gamma[0], 0.0);
    }

    #[test]
    fn beta_shared_between_variants() {
        let d = AdrcDesign::new(2, 1e4, 4000.0, 5.0, 2e-5).unwrap();
        let single = tf_coefficients_closed_form(&d, TfVariant::SingleTf).unwrap();
        let dual = tf_coefficients_closed_form(&d, TfVariant::DualFeedback).unwrap();
        assert_eq!(single.beta, dual.beta);
        assert_eq!(single.gamma.len(), 4);
        dual.check_shape().unwrap();
    }

    #[test]
    fn third_order_has_no_table() {
        let d = AdrcDesign::new(3, 1.0, 10.0, 5.0, 0.01).unwrap();
        assert_eq!(
            tf_coefficients_closed_form(&d, TfVariant::SingleTf),
            Err(AdrcError::UnsupportedOrder(3))
        );
    }

    #[test]
    fn variant_names_round_trip() {
        for v in [TfVariant::SingleTf, TfVariant::DualFeedback] {
            assert_eq!(v.as_str().parse::<TfVariant>().unwrap(), v);
        }
        assert!("both".parse::<TfVariant>().is_err());
    }
}
