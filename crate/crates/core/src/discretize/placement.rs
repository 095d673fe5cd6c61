//! Ackermann pole placement for the ZOH integrator chains.
//!
//! The discrete virtual plant at sampling interval `T` is similar to the one
//! at `T = 1` under the diagonal scaling `x_i ↦ x_i / T^(n−i)`, so gains are
//! placed on the normalized chain and rescaled afterwards. This keeps the
//! controllability and observability matrices well conditioned even for
//! `ω·T = 1e−4` and fifth-order plants.

use nalgebra::{DMatrix, DVector};

use super::oracle::characteristic_polynomial;
use super::zoh::{zoh_integrator_chain, zoh_virtual_plant};
use crate::poly::{max_abs_diff, repeated_root};
use crate::{AdrcError, Result};

/// Largest accepted deviation between the placed characteristic polynomial
/// and `(z − p)^m`, coefficient by coefficient.
pub const PLACEMENT_TOLERANCE: f64 = 1e-9;

fn repeated_root_matrix_poly(a: &DMatrix<f64>, pole: f64) -> DMatrix<f64> {
    let m = a.nrows();
    let shifted = a - DMatrix::identity(m, m) * pole;
    let mut acc = DMatrix::identity(m, m);
    for _ in 0..m {
        acc = &acc * &shifted;
    }
    acc
}

fn singular(what: &str) -> AdrcError {
    AdrcError::Dimension(format!("{what} matrix is singular"))
}

/// State feedback `kᵀ` placing all eigenvalues of `A − b·kᵀ` at `pole`.
pub fn ackermann(a: &DMatrix<f64>, b: &DVector<f64>, pole: f64) -> Result<DVector<f64>> {
    let m = a.nrows();
    let mut ctrb = DMatrix::zeros(m, m);
    let mut col = b.clone();
    for j in 0..m {
        ctrb.set_column(j, &col);
        col = a * col;
    }
    // kᵀ = e_mᵀ·Ctrb⁻¹·φ(A)  ⇔  k = φ(A)ᵀ·v with Ctrbᵀ·v = e_m
    let mut e = DVector::zeros(m);
    e[m - 1] = 1.0;
    let v = ctrb.transpose().lu().solve(&e).ok_or_else(|| singular("controllability"))?;
    Ok(repeated_root_matrix_poly(a, pole).transpose() * v)
}

/// Output injection `l` placing all eigenvalues of `A − l·hᵀ` at `pole`.
pub fn ackermann_observer(a: &DMatrix<f64>, h: &DVector<f64>, pole: f64) -> Result<DVector<f64>> {
    let m = a.nrows();
    let mut obs = DMatrix::zeros(m, m);
    let mut row = h.transpose();
    for i in 0..m {
        obs.set_row(i, &row);
        row *= a;
    }
    let mut e = DVector::zeros(m);
    e[m - 1] = 1.0;
    let w = obs.lu().solve(&e).ok_or_else(|| singular("observability"))?;
    Ok(repeated_root_matrix_poly(a, pole) * w)
}

/// Controller gains for the order-`n` virtual plant.
pub fn place_controller_poles(order: usize, z_cl: f64, sample_time: f64) -> Result<Vec<f64>> {
    let unit = zoh_virtual_plant(order, 1.0)?;
    let k = ackermann(&unit.a, &unit.b, z_cl)?;
    Ok((0..order)
        .map(|i| k[i] / sample_time.powi((order - i) as i32))
        .collect())
}

/// Current-observer gains for the order-`n` extended chain (`n + 1` states).
pub fn place_observer_poles(order: usize, z_eso: f64, sample_time: f64) -> Result<Vec<f64>> {
    let unit = zoh_integrator_chain(order, 1.0, 1.0)?;
    // A_ESO = A_d − l·(c_dᵀ·A_d)
    let h = unit.a.transpose() * &unit.c;
    let l = ackermann_observer(&unit.a, &h, z_eso)?;
    Ok((0..=order).map(|i| l[i] / sample_time.powi(i as i32)).collect())
}

/// Coefficient residual of `det(zI − (A_VP,d − b_VP,d·kᵀ))` against `(z − z_cl)^n`.
pub fn controller_residual(order: usize, sample_time: f64, k: &[f64], z_cl: f64) -> f64 {
    let Ok(plant) = zoh_virtual_plant(order, sample_time) else {
        return f64::INFINITY;
    };
    if k.len() != order {
        return f64::INFINITY;
    }
    let kt = DVector::from_column_slice(k).transpose();
    let closed = &plant.a - &plant.b * kt;
    max_abs_diff(&characteristic_polynomial(&closed), &repeated_root(z_cl, order))
}

/// Coefficient residual of `det(zI − A_ESO)` against `(z − z_eso)^(n+1)`.
pub fn observer_residual(order: usize, sample_time: f64, l: &[f64], z_eso: f64) -> f64 {
    let Ok(chain) = zoh_integrator_chain(order, 1.0, sample_time) else {
        return f64::INFINITY;
    };
    if l.len() != order + 1 {
        return f64::INFINITY;
    }
    let l = DVector::from_column_slice(l);
    let a_eso = &chain.a - &l * (chain.c.transpose() * &chain.a);
    max_abs_diff(&characteristic_polynomial(&a_eso), &repeated_root(z_eso, order + 1))
}

pub fn ensure_placed(residual: f64) -> Result<()> {
    if residual <= PLACEMENT_TOLERANCE {
        Ok(())
    } else {
        Err(AdrcError::Placement {
            residual,
            tolerance: PLACEMENT_TOLERANCE,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ackermann_on_double_integrator() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        let b = DVector::from_column_slice(&[0.005, 0.1]);
        let k = ackermann(&a, &b, 0.5).unwrap();
        let z: f64 = 0.5;
        assert!((k[0] - (1.0 - z).powi(2) / 0.01).abs() < 1e-10);
        assert!((k[1] - (4.0 - (1.0 + z).powi(2)) / 0.2).abs() < 1e-10);
    }

    #[test]
    fn observer_placement_matches_first_order_closed_form() {
        let z: f64 = 0.5;
        let l = place_observer_poles(1, z, 0.01).unwrap();
        assert!((l[0] - 0.75).abs() < 1e-12);
        assert!((l[1] - 25.0).abs() < 1e-9);
    }

    #[test]
    fn residual_detects_wrong_gains() {
        let r = controller_residual(2, 0.1, &[1.0, 1.0], 0.5);
        assert!(ensure_placed(r).is_err());
        assert!(matches!(ensure_placed(0.0), Ok(())));
    }

    #[test]
    fn singular_controllability_is_reported() {
        let a = DMatrix::identity(2, 2);
        let b = DVector::from_column_slice(&[1.0, 1.0]);
        assert!(ackermann(&a, &b, 0.3).is_err());
    }
}
