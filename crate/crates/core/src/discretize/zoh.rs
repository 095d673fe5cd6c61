use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{AdrcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlantKind {
    /// Integrator chain extended by the disturbance state (`m = n + 1`).
    ContinuousExtended,
    /// Unity-gain integrator chain seen by the state feedback (`m = n`).
    ContinuousVirtual,
    DiscreteZoh,
}

/// State-space triple `(A, b, cᵀ)` of a single-input single-output model.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantTriple {
    pub kind: PlantKind,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    /// Output row `cᵀ`, stored as a column vector.
    pub c: DVector<f64>,
}

impl PlantTriple {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

/// Shift matrix with ones on the first superdiagonal.
fn shift(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| if j == i + 1 { 1.0 } else { 0.0 })
}

fn unit(m: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(m);
    v[i] = 1.0;
    v
}

/// Continuous observer model: `n` integrators plus a constant disturbance
/// state, input gain `b₀` entering at row `n`.
pub fn continuous_extended(order: usize, b0: f64) -> PlantTriple {
    let m = order + 1;
    let mut b = DVector::zeros(m);
    b[order - 1] = b0;
    PlantTriple {
        kind: PlantKind::ContinuousExtended,
        a: shift(m),
        b,
        c: unit(m, 0),
    }
}

/// Continuous virtual plant `y⁽ⁿ⁾ = u₀`.
pub fn continuous_virtual(order: usize) -> PlantTriple {
    PlantTriple {
        kind: PlantKind::ContinuousVirtual,
        a: shift(order),
        b: unit(order, order - 1),
        c: unit(order, 0),
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// ZOH discretization of an integrator chain of dimension `m` whose input
/// enters at row `input_row` with gain `gain`.
///
/// The matrix exponential series of a nilpotent shift terminates after `m`
/// terms, so the result is exact: `A_d(i,j) = T^(j−i)/(j−i)!` and
/// `b_d(i) = gain · T^(input_row−i+1)/(input_row−i+1)!`.
fn zoh_chain(m: usize, input_row: usize, gain: f64, t: f64) -> (DMatrix<f64>, DVector<f64>) {
    let a = DMatrix::from_fn(m, m, |i, j| {
        if j >= i {
            t.powi((j - i) as i32) / factorial(j - i)
        } else {
            0.0
        }
    });
    let b = DVector::from_fn(m, |i, _| {
        if i <= input_row {
            let p = input_row - i + 1;
            gain * t.powi(p as i32) / factorial(p)
        } else {
            0.0
        }
    });
    (a, b)
}

fn check(order: usize, t: f64) -> Result<()> {
    if order == 0 {
        return Err(AdrcError::domain("n", "plant order must be at least 1"));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(AdrcError::domain("T", format!("sampling interval must be positive, got {t}")));
    }
    Ok(())
}

/// ZOH-discretized extended observer model (dimension `n + 1`).
pub fn zoh_integrator_chain(order: usize, b0: f64, sample_time: f64) -> Result<PlantTriple> {
    check(order, sample_time)?;
    let m = order + 1;
    let (a, b) = zoh_chain(m, order - 1, b0, sample_time);
    Ok(PlantTriple {
        kind: PlantKind::DiscreteZoh,
        a,
        b,
        c: unit(m, 0),
    })
}

/// ZOH-discretized virtual plant (dimension `n`, unity input gain).
pub fn zoh_virtual_plant(order: usize, sample_time: f64) -> Result<PlantTriple> {
    check(order, sample_time)?;
    let (a, b) = zoh_chain(order, order - 1, 1.0, sample_time);
    Ok(PlantTriple {
        kind: PlantKind::DiscreteZoh,
        a,
        b,
        c: unit(order, 0),
    })
}

/// Generic ZOH discretization through the block matrix exponential
/// `exp([[A, b], [0, 0]]·T)`.
pub fn zoh_discretize(a: &DMatrix<f64>, b: &DVector<f64>, sample_time: f64) -> (DMatrix<f64>, DVector<f64>) {
    let m = a.nrows();
    let mut block = DMatrix::zeros(m + 1, m + 1);
    block.view_mut((0, 0), (m, m)).copy_from(a);
    block.view_mut((0, m), (m, 1)).copy_from(b);
    let phi = (block * sample_time).exp();
    (phi.view((0, 0), (m, m)).into_owned(), phi.view((0, m), (m, 1)).column(0).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn first_order_unit_step() {
        let p = zoh_integrator_chain(1, 1.0, 1.0).unwrap();
        assert_eq!(p.a, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]));
        assert_eq!(p.b.as_slice(), &[1.0, 0.0]);
        assert_eq!(p.c.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn second_order_input_vector() {
        let p = zoh_integrator_chain(2, 2.0, 0.5).unwrap();
        // b₀·T²/2, b₀·T, 0
        assert_eq!(p.b.as_slice(), &[0.25, 1.0, 0.0]);
    }

    #[test]
    fn matches_matrix_exponential_oracle() {
        for order in 1..=4 {
            for t in [1e-4, 0.05, 0.5, 2.0] {
                let ct = continuous_extended(order, 3.0);
                let (ad, bd) = zoh_discretize(&ct.a, &ct.b, t);
                let p = zoh_integrator_chain(order, 3.0, t).unwrap();
                assert_close(&p.a, &ad, 1e-12);
                assert_close(&DMatrix::from_column_slice(order + 1, 1, p.b.as_slice()),
                    &DMatrix::from_column_slice(order + 1, 1, bd.as_slice()), 1e-12);

                let vp = continuous_virtual(order);
                let (ad, bd) = zoh_discretize(&vp.a, &vp.b, t);
                let p = zoh_virtual_plant(order, t).unwrap();
                assert_close(&p.a, &ad, 1e-12);
                assert_close(&DMatrix::from_column_slice(order, 1, p.b.as_slice()),
                    &DMatrix::from_column_slice(order, 1, bd.as_slice()), 1e-12);
            }
        }
    }

    #[test]
    fn series_truncation_is_exact() {
        // A^(n+1) = 0, so the first n+1 series terms are the whole story.
        let ct = continuous_extended(3, 1.0);
        let mut pow = DMatrix::identity(4, 4);
        for _ in 0..4 {
            pow *= &ct.a;
        }
        assert!(pow.iter().all(|v| *v == 0.0));
        let t = 0.7;
        let mut series = DMatrix::identity(4, 4);
        let mut term = DMatrix::identity(4, 4);
        for i in 1..12 {
            term = &term * &ct.a * (t / i as f64);
            series += &term;
        }
        assert_close(&zoh_integrator_chain(3, 1.0, t).unwrap().a, &series, 1e-15);
    }

    #[test]
    fn zero_matrix_exponential_is_identity() {
        let (ad, bd) = zoh_discretize(&DMatrix::zeros(3, 3), &DVector::zeros(3), 0.4);
        assert_eq!(ad, DMatrix::identity(3, 3));
        assert!(bd.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn virtual_plant_examples() {
        let p = zoh_virtual_plant(1, 0.01).unwrap();
        assert_eq!(p.a.as_slice(), &[1.0]);
        assert_eq!(p.b.as_slice(), &[0.01]);
        let p = zoh_virtual_plant(2, 2.0).unwrap();
        assert_eq!(p.b.as_slice(), &[2.0, 2.0]);
        assert_eq!(p.a, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]));
        assert!(zoh_virtual_plant(2, 0.0).is_err());
        assert!(zoh_integrator_chain(0, 1.0, 0.1).is_err());
    }
}
