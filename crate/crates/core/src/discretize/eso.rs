//! Current-observer form of the discrete extended state observer.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::oracle::characteristic_polynomial;
use super::placement::ensure_placed;
use super::zoh::zoh_integrator_chain;
use crate::poly::{max_abs_diff, repeated_root};
use crate::tuning::{dt_observer_gains, dt_pole_locations, AdrcDesign};
use crate::{AdrcError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsoMatrices {
    pub a_d: DMatrix<f64>,
    pub b_d: DVector<f64>,
    pub c_d: DVector<f64>,
    pub l: DVector<f64>,
    /// `A_d − l·c_dᵀ·A_d`
    pub a_eso: DMatrix<f64>,
    /// `b_d − l·c_dᵀ·b_d`
    pub b_eso: DVector<f64>,
    /// Coefficient distance between `det(zI − A_ESO)` and `(z − z_eso)^(n+1)`.
    pub placement_residual: f64,
}

/// Builds the observer matrices for arbitrary gains `l`.
///
/// The placement residual is always computed but only enforced by
/// [`build_tuned_eso`], since hand-picked gains need not hit `z_eso`.
pub fn build_eso(design: &AdrcDesign, l: &[f64]) -> Result<EsoMatrices> {
    design.validate()?;
    let m = design.order + 1;
    if l.len() != m {
        return Err(AdrcError::Dimension(format!("expected {m} observer gains, got {}", l.len())));
    }
    let chain = zoh_integrator_chain(design.order, design.b0, design.sample_time)?;
    let l = DVector::from_column_slice(l);
    let ct_a = chain.c.transpose() * &chain.a;
    let a_eso = &chain.a - &l * ct_a;
    let b_eso = &chain.b - &l * chain.c.dot(&chain.b);
    let z_eso = dt_pole_locations(design).z_eso;
    let placement_residual = max_abs_diff(&characteristic_polynomial(&a_eso), &repeated_root(z_eso, m));
    Ok(EsoMatrices {
        a_d: chain.a,
        b_d: chain.b,
        c_d: chain.c,
        l,
        a_eso,
        b_eso,
        placement_residual,
    })
}

/// Observer matrices with discrete-time tuned gains, placement enforced.
pub fn build_tuned_eso(design: &AdrcDesign) -> Result<EsoMatrices> {
    let eso = build_eso(design, &dt_observer_gains(design)?)?;
    ensure_placed(eso.placement_residual)?;
    Ok(eso)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gain_leaves_plant_matrices() {
        let d = AdrcDesign::new(1, 3.0, 10.0, 5.0, 0.01).unwrap();
        let eso = build_eso(&d, &[0.0, 0.0]).unwrap();
        assert_eq!(eso.a_eso, eso.a_d);
        assert_eq!(eso.b_eso, eso.b_d);
    }

    #[test]
    fn tuned_first_order_eigenvalues() {
        let d = AdrcDesign::new(1, 1.0, 10.0, 10.0, 0.001).unwrap();
        let eso = build_tuned_eso(&d).unwrap();
        let z = 0.904_837_418_035_959_6;
        // repeated eigenvalue: trace = 2z, det = z²
        assert!((eso.a_eso.trace() - 2.0 * z).abs() < 1e-12);
        assert!((eso.a_eso.determinant() - z * z).abs() < 1e-12);
        assert!(eso.placement_residual < 1e-12);
    }

    #[test]
    fn second_order_determinant() {
        // ω·k_eso·T = ln 2 puts z_eso at 0.5
        let t = 0.1;
        let d = AdrcDesign::new(2, 1.0, std::f64::consts::LN_2 / t, 1.0, t).unwrap();
        let eso = build_tuned_eso(&d).unwrap();
        assert!((eso.a_eso.determinant() - 0.125).abs() < 1e-12);
        assert!(eso.c_d == DVector::from_column_slice(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn wrong_length_rejected() {
        let d = AdrcDesign::new(2, 1.0, 10.0, 5.0, 0.01).unwrap();
        assert!(matches!(build_eso(&d, &[1.0, 2.0]), Err(AdrcError::Dimension(_))));
    }
}
