//! Leverrier–Faddeev resolvent expansion and the transfer-function oracle.
//!
//! For an `m×m` matrix `M` the recursion
//!
//! ```text
//! N₀ = I,   c_k = −tr(M·N_{k−1}) / k,   N_k = M·N_{k−1} + c_k·I
//! ```
//!
//! yields `det(zI − M) = z^m + c₁z^(m−1) + … + c_m` and
//! `adj(zI − M) = Σ N_k z^(m−1−k)`. Dividing numerator and denominator by
//! `z^m` gives the delay-operator form used by all transfer functions here:
//!
//! ```text
//! pᵀ (I − z⁻¹M)⁻¹ q = Σ_k (pᵀ N_k q) z⁻ᵏ / (1 + Σ_k c_k z⁻ᵏ)
//! ```
//!
//! The oracle never touches the closed-form tables; it only needs the gains
//! and the ZOH matrices.

use nalgebra::{DMatrix, DVector};

use super::coefficients::{TfCoefficients, TfVariant};
use super::eso::build_eso;
use crate::poly;
use crate::tuning::AdrcDesign;
use crate::{AdrcError, Result};

/// Largest remainder accepted when factoring the integrator pole out of the
/// single-TF feedback controller.
pub const INTEGRATOR_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Resolvent {
    /// `N₀ … N_{m−1}`.
    pub adjugate_terms: Vec<DMatrix<f64>>,
    /// `[1, c₁, …, c_m]`.
    pub char_poly: Vec<f64>,
}

impl Resolvent {
    /// Numerator coefficients `pᵀ N_k q` for `k = 0 … m−1`.
    pub fn numerator(&self, p: &DVector<f64>, q: &DVector<f64>) -> Vec<f64> {
        self.adjugate_terms.iter().map(|n| p.dot(&(n * q))).collect()
    }
}

pub fn leverrier_faddeev(m: &DMatrix<f64>) -> Resolvent {
    assert!(m.is_square(), "resolvent expansion needs a square matrix");
    let dim = m.nrows();
    let identity = DMatrix::<f64>::identity(dim, dim);
    let mut adjugate_terms = Vec::with_capacity(dim);
    let mut char_poly = Vec::with_capacity(dim + 1);
    char_poly.push(1.0);
    let mut n = identity.clone();
    for k in 1..=dim {
        let mn = m * &n;
        let c = -mn.trace() / k as f64;
        adjugate_terms.push(n);
        char_poly.push(c);
        n = mn + &identity * c;
    }
    Resolvent {
        adjugate_terms,
        char_poly,
    }
}

/// `[1, c₁, …, c_m]` of `det(zI − M)`.
pub fn characteristic_polynomial(m: &DMatrix<f64>) -> Vec<f64> {
    leverrier_faddeev(m).char_poly
}

/// Re-derives transfer-function coefficients from `(k, l)` and the ZOH
/// observer matrices.
///
/// Works for any order. For [`TfVariant::SingleTf`] the integrator pole at
/// `z = 1` is divided out of the feedback denominator; if it is not there
/// (inconsistent gains) the call fails with
/// [`AdrcError::MissingIntegrator`].
pub fn tf_coefficients_oracle(
    design: &AdrcDesign,
    k: &[f64],
    l: &[f64],
    variant: TfVariant,
) -> Result<TfCoefficients> {
    design.validate()?;
    let n = design.order;
    if k.len() != n {
        return Err(AdrcError::Dimension(format!("expected {n} controller gains, got {}", k.len())));
    }
    let eso = build_eso(design, l)?;
    let l = DVector::from_column_slice(l);
    // p = [kᵀ 1]ᵀ / b₀
    let p = DVector::from_fn(n + 1, |i, _| if i < n { k[i] } else { 1.0 }) / design.b0;
    let k1_over_b0 = k[0] / design.b0;

    match variant {
        TfVariant::DualFeedback => {
            let res = leverrier_faddeev(&eso.a_eso);
            let beta = res.numerator(&p, &l);
            let gamma: Vec<f64> = res.numerator(&p, &eso.b_eso).into_iter().map(|g| -g).collect();
            Ok(TfCoefficients {
                design: *design,
                variant,
                alpha: res.char_poly[1..].to_vec(),
                beta,
                gamma,
                k1_over_b0: Some(k1_over_b0),
            })
        }
        TfVariant::SingleTf => {
            // Closed observer loop with u = u_lim: A_ESO − b_ESO·pᵀ.
            let closed = &eso.a_eso - &eso.b_eso * p.transpose();
            let res = leverrier_faddeev(&closed);
            let beta = res.numerator(&p, &l);
            let (reduced, remainder) = poly::deflate(&res.char_poly, 1.0);
            if remainder.abs() > INTEGRATOR_TOLERANCE {
                return Err(AdrcError::MissingIntegrator { residual: remainder });
            }
            // C_PF numerator: (k₁/b₀)·(D(x) − x·pᵀΦ-numerator·b_ESO)
            let g = res.numerator(&p, &eso.b_eso);
            let mut gamma: Vec<f64> = res.char_poly.clone();
            for (i, gi) in g.iter().enumerate() {
                gamma[i + 1] -= gi;
            }
            let gamma = gamma.into_iter().map(|v| v * k1_over_b0).collect();
            Ok(TfCoefficients {
                design: *design,
                variant,
                alpha: reduced[1..].to_vec(),
                beta,
                gamma,
                k1_over_b0: None,
            })
        }
    }
}

/// Remainder left after dividing the single-TF feedback denominator
/// (before factoring) by `1 − z⁻¹`.
pub fn integrator_residual(design: &AdrcDesign, k: &[f64], l: &[f64]) -> Result<f64> {
    let eso = build_eso(design, l)?;
    let n = design.order;
    let p = DVector::from_fn(n + 1, |i, _| if i < n { k[i] } else { 1.0 }) / design.b0;
    let closed = &eso.a_eso - &eso.b_eso * p.transpose();
    Ok(poly::eval(&characteristic_polynomial(&closed), 1.0))
}
