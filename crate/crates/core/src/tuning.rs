//! Bandwidth-parameterized gains for linear ADRC.
//!
//! All closed-loop poles sit at one location set by the closed-loop
//! bandwidth `ω_CL`; all observer poles sit at `k_ESO · ω_CL`. Gains are
//! available from the continuous-time design (the long-standing
//! quasi-continuous practice) and from exact pole placement on the
//! ZOH-discretized virtual plant and current observer.

use serde::{Deserialize, Serialize};

use crate::discretize::placement;
use crate::poly::binomial;
use crate::{AdrcError, Result};

/// Above this `ω_CL·T` quasi-continuous gains noticeably overestimate the
/// discrete-time gains.
pub const SAMPLING_DANGER_ZONE: f64 = 0.1;

/// Tuning parameters of one ADRC design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdrcDesign {
    /// Plant order `n`.
    #[serde(rename = "n", alias = "order")]
    pub order: usize,
    /// Plant gain estimate `b₀`.
    pub b0: f64,
    /// Closed-loop bandwidth in rad/s.
    pub omega_cl: f64,
    /// Observer bandwidth relative to `omega_cl`.
    pub k_eso: f64,
    /// Sampling interval in seconds.
    #[serde(rename = "T", alias = "sample_time")]
    pub sample_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignWarning {
    /// `ω_CL·T > 0.1`: continuous-time gains are no longer trustworthy.
    CoarseSampling,
    /// `k_ESO·ω_CL·T ≥ π`: the observer pole is numerically tiny and the
    /// transfer-function coefficients lose conditioning.
    ObserverAliasing,
    /// `k_ESO ≤ 1`: the observer is not faster than the control loop.
    SlowObserver,
}

impl AdrcDesign {
    pub fn new(order: usize, b0: f64, omega_cl: f64, k_eso: f64, sample_time: f64) -> Result<Self> {
        let design = AdrcDesign {
            order,
            b0,
            omega_cl,
            k_eso,
            sample_time,
        };
        design.validate()?;
        Ok(design)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(AdrcError::domain("n", "plant order must be at least 1"));
        }
        if !self.b0.is_finite() || self.b0 == 0.0 {
            return Err(AdrcError::domain("b0", format!("must be finite and nonzero, got {}", self.b0)));
        }
        if !(self.omega_cl.is_finite() && self.omega_cl > 0.0) {
            return Err(AdrcError::domain(
                "omega_cl",
                format!("must be positive, got {}", self.omega_cl),
            ));
        }
        if !(self.k_eso.is_finite() && self.k_eso > 0.0) {
            return Err(AdrcError::domain("k_eso", format!("must be positive, got {}", self.k_eso)));
        }
        check_sample_time(self.sample_time)
    }

    /// Observer bandwidth `k_ESO · ω_CL` in rad/s.
    pub fn observer_bandwidth(&self) -> f64 {
        self.k_eso * self.omega_cl
    }

    /// Relative sampling interval `ω_CL · T`.
    pub fn relative_sample_time(&self) -> f64 {
        self.omega_cl * self.sample_time
    }

    pub fn warnings(&self) -> Vec<DesignWarning> {
        let mut out = Vec::new();
        if self.relative_sample_time() > SAMPLING_DANGER_ZONE {
            out.push(DesignWarning::CoarseSampling);
        }
        if self.observer_bandwidth() * self.sample_time >= std::f64::consts::PI {
            out.push(DesignWarning::ObserverAliasing);
        }
        if self.k_eso <= 1.0 {
            out.push(DesignWarning::SlowObserver);
        }
        out
    }
}

fn check_sample_time(sample_time: f64) -> Result<()> {
    if sample_time.is_finite() && sample_time > 0.0 {
        Ok(())
    } else {
        Err(AdrcError::domain("T", format!("sampling interval must be positive, got {sample_time}")))
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        Err(AdrcError::domain("n", "plant order must be at least 1"))
    } else {
        Ok(())
    }
}

/// Discrete pole locations of the closed loop and the observer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleLocations {
    pub z_cl: f64,
    pub z_eso: f64,
}

/// Maps an s-plane pole at `−bandwidth` to `e^(−bandwidth·T)`.
pub fn pole_location(bandwidth: f64, sample_time: f64) -> f64 {
    (-bandwidth * sample_time).exp()
}

pub fn dt_pole_locations(design: &AdrcDesign) -> PoleLocations {
    PoleLocations {
        z_cl: pole_location(design.omega_cl, design.sample_time),
        z_eso: pole_location(design.observer_bandwidth(), design.sample_time),
    }
}

/// Continuous-time controller gains `k_i = C(n, i−1) · ω^(n−i+1)`.
pub fn ct_controller_gains(design: &AdrcDesign) -> Result<Vec<f64>> {
    design.validate()?;
    let n = design.order;
    Ok((1..=n)
        .map(|i| binomial(n, i - 1) * design.omega_cl.powi((n - i + 1) as i32))
        .collect())
}

/// Continuous-time observer gains `l_i = C(n+1, i) · (k_ESO·ω)^i`.
pub fn ct_observer_gains(design: &AdrcDesign) -> Result<Vec<f64>> {
    design.validate()?;
    let n = design.order;
    let w = design.observer_bandwidth();
    Ok((1..=n + 1).map(|i| binomial(n + 1, i) * w.powi(i as i32)).collect())
}

/// Discrete-time controller gains placing all poles of the ZOH virtual
/// plant under state feedback at `z_cl`.
pub fn dt_controller_gains(design: &AdrcDesign) -> Result<Vec<f64>> {
    design.validate()?;
    let poles = dt_pole_locations(design);
    dt_controller_gains_for_pole(design.order, poles.z_cl, design.sample_time)
}

/// Same as [`dt_controller_gains`] for an explicit pole location.
///
/// Orders 1 and 2 use closed forms; higher orders go through numeric
/// Ackermann placement and are rejected if the placed characteristic
/// polynomial misses the target by more than the placement tolerance.
pub fn dt_controller_gains_for_pole(order: usize, z_cl: f64, sample_time: f64) -> Result<Vec<f64>> {
    check_order(order)?;
    check_sample_time(sample_time)?;
    let t = sample_time;
    match order {
        1 => Ok(vec![(1.0 - z_cl) / t]),
        2 => Ok(vec![
            (1.0 - z_cl).powi(2) / (t * t),
            (4.0 - (1.0 + z_cl).powi(2)) / (2.0 * t),
        ]),
        _ => {
            let k = placement::place_controller_poles(order, z_cl, t)?;
            placement::ensure_placed(placement::controller_residual(order, t, &k, z_cl))?;
            Ok(k)
        }
    }
}

/// Discrete-time current-observer gains placing all eigenvalues of
/// `A_ESO = A_d − l·c_dᵀ·A_d` at `z_eso`.
pub fn dt_observer_gains(design: &AdrcDesign) -> Result<Vec<f64>> {
    design.validate()?;
    let poles = dt_pole_locations(design);
    dt_observer_gains_for_pole(design.order, poles.z_eso, design.sample_time)
}

pub fn dt_observer_gains_for_pole(order: usize, z_eso: f64, sample_time: f64) -> Result<Vec<f64>> {
    check_order(order)?;
    check_sample_time(sample_time)?;
    let t = sample_time;
    let z = z_eso;
    match order {
        1 => Ok(vec![1.0 - z * z, (1.0 - z).powi(2) / t]),
        2 => Ok(vec![
            1.0 - z.powi(3),
            3.0 / (2.0 * t) * (1.0 - z).powi(2) * (1.0 + z),
            (1.0 - z).powi(3) / (t * t),
        ]),
        _ => {
            let l = placement::place_observer_poles(order, z, t)?;
            placement::ensure_placed(placement::observer_residual(order, t, &l, z))?;
            Ok(l)
        }
    }
}

/// Ratio `k_CT / k_DT` of the controller gains as a function of `x = ω_CL·T`.
///
/// Returns one ratio for first-order ADRC and two (`k₁`, `k₂`) for
/// second-order ADRC. `1 − e^(−x)` is evaluated with `expm1` so the ratios
/// stay accurate as `x → 0`.
pub fn ct_dt_gain_ratio(order: usize, x: f64) -> Result<Vec<f64>> {
    if !(x.is_finite() && x > 0.0) {
        return Err(AdrcError::domain("x", format!("ω_CL·T must be positive, got {x}")));
    }
    let one_minus_z = -(-x).exp_m1();
    match order {
        1 => Ok(vec![x / one_minus_z]),
        2 => {
            let z = (-x).exp();
            // 4 − (1 + z)² = (1 − z)(3 + z)
            Ok(vec![
                (x / one_minus_z).powi(2),
                4.0 * x / (one_minus_z * (3.0 + z)),
            ])
        }
        _ => Err(AdrcError::domain("n", format!("gain ratios are defined for order 1 and 2, got {order}"))),
    }
}

/// How a runtime controller's gains were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningMethod {
    /// Continuous-time controller and observer gains (design reference only).
    ContinuousTime,
    /// Discrete-time pole placement for controller and observer.
    DiscreteTime,
    /// Continuous-time controller gains with the discrete-time observer.
    QuasiContinuous,
}

/// Controller gains `k` (length n) and observer gains `l` (length n+1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainSet {
    pub method: TuningMethod,
    pub k: Vec<f64>,
    pub l: Vec<f64>,
}

impl GainSet {
    pub fn for_method(design: &AdrcDesign, method: TuningMethod) -> Result<Self> {
        let (k, l) = match method {
            TuningMethod::ContinuousTime => (ct_controller_gains(design)?, ct_observer_gains(design)?),
            TuningMethod::DiscreteTime => (dt_controller_gains(design)?, dt_observer_gains(design)?),
            TuningMethod::QuasiContinuous => (ct_controller_gains(design)?, dt_observer_gains(design)?),
        };
        Ok(GainSet { method, k, l })
    }

    pub fn continuous(design: &AdrcDesign) -> Result<Self> {
        Self::for_method(design, TuningMethod::ContinuousTime)
    }

    pub fn discrete(design: &AdrcDesign) -> Result<Self> {
        Self::for_method(design, TuningMethod::DiscreteTime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::oracle::characteristic_polynomial;
    use crate::discretize::zoh;
    use crate::poly::{max_abs_diff, multiply, repeated_root};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn design(order: usize, omega: f64, k_eso: f64, t: f64) -> AdrcDesign {
        AdrcDesign::new(order, 1.0, omega, k_eso, t).unwrap()
    }

    /// Coefficients of (λ + a)^m by repeated multiplication, independent of
    /// the binomial formula.
    fn expand_brute(a: f64, m: usize) -> Vec<f64> {
        let mut acc = vec![1.0];
        for _ in 0..m {
            // ascending powers of λ
            acc = multiply(&acc, &[a, 1.0]);
        }
        acc
    }

    #[test]
    fn ct_controller_gain_examples() {
        assert_eq!(ct_controller_gains(&design(1, 10.0, 10.0, 1e-3)).unwrap(), vec![10.0]);
        assert_eq!(ct_controller_gains(&design(2, 10.0, 10.0, 1e-3)).unwrap(), vec![100.0, 20.0]);
        let k3 = ct_controller_gains(&design(3, 2.0, 10.0, 1e-3)).unwrap();
        // (λ+2)³ ascending: [8, 12, 6, 1] → k₁ = 8, k₂ = 12, k₃ = 6
        let oracle = expand_brute(2.0, 3);
        assert_eq!(k3, oracle[..3].to_vec());
        assert_eq!(k3, vec![8.0, 12.0, 6.0]);
    }

    #[test]
    fn ct_observer_gain_examples() {
        let l = ct_observer_gains(&design(1, 10.0, 10.0, 1e-3)).unwrap();
        let oracle = expand_brute(100.0, 2);
        assert_eq!(l, vec![oracle[1], oracle[0]]);
        assert_eq!(l, vec![200.0, 10000.0]);
        assert_eq!(ct_observer_gains(&design(2, 1.0, 1.0, 1e-3)).unwrap(), vec![3.0, 3.0, 1.0]);
        let l = ct_observer_gains(&design(2, 2.0, 5.0, 1e-3)).unwrap();
        let oracle = expand_brute(10.0, 3);
        assert_eq!(l, vec![oracle[2], oracle[1], oracle[0]]);
        assert_eq!(l, vec![30.0, 300.0, 1000.0]);
    }

    #[test]
    fn ct_gains_match_characteristic_polynomial() {
        for n in 1..=4 {
            let d = design(n, 3.7, 4.0, 1e-3);
            let k = ct_controller_gains(&d).unwrap();
            // A_VP − b_VP kᵀ in companion form
            let mut a = DMatrix::<f64>::zeros(n, n);
            for i in 0..n - 1 {
                a[(i, i + 1)] = 1.0;
            }
            for j in 0..n {
                a[(n - 1, j)] -= k[j];
            }
            let cp = characteristic_polynomial(&a);
            let expected: Vec<f64> = expand_brute(3.7, n).into_iter().rev().collect();
            for (c, e) in cp.iter().zip(&expected) {
                assert_relative_eq!(c, e, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn pole_location_examples() {
        assert_eq!(pole_location(0.0, 0.3), 1.0);
        let p = dt_pole_locations(&design(1, 10.0, 10.0, 0.05));
        assert_relative_eq!(p.z_cl, 0.606_530_659_712_633_4, max_relative = 1e-12);
        let p = dt_pole_locations(&design(1, 10.0, 10.0, 0.001));
        assert_relative_eq!(p.z_eso, 0.904_837_418_035_959_6, max_relative = 1e-12);
        assert!(p.z_eso <= p.z_cl && p.z_cl <= 1.0);
    }

    #[test]
    fn dt_controller_gain_examples() {
        let k = dt_controller_gains(&design(1, 10.0, 10.0, 0.001)).unwrap();
        assert_relative_eq!(k[0], 9.950_166_250_831_946, max_relative = 1e-12);
        // z_cl = 1 forces k₁ = 0
        assert_eq!(dt_controller_gains_for_pole(1, 1.0, 0.01).unwrap(), vec![0.0]);

        let k = dt_controller_gains(&design(2, 10.0, 10.0, 0.05)).unwrap();
        // frozen from a 30-digit evaluation of the closed forms
        assert_relative_eq!(k[0], 61.927_248_698_470_19, max_relative = 1e-12);
        assert_relative_eq!(k[1], 14.190_592_394_032_908, max_relative = 1e-12);
        let z = (-0.5f64).exp();
        let residual = placement::controller_residual(2, 0.05, &k, z);
        assert!(residual < 1e-12, "{residual}");
    }

    #[test]
    fn dt_controller_gains_agree_with_numeric_placement() {
        for order in [1usize, 2] {
            for x in [1e-4, 1e-2, 0.3, 1.0] {
                let t = 0.01;
                let z = pole_location(x / t, t);
                let closed = dt_controller_gains_for_pole(order, z, t).unwrap();
                let numeric = placement::place_controller_poles(order, z, t).unwrap();
                for (a, b) in closed.iter().zip(&numeric) {
                    assert_relative_eq!(a, b, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn dt_observer_gain_examples() {
        let t = 0.01;
        let l = dt_observer_gains_for_pole(1, 0.5, t).unwrap();
        assert_relative_eq!(l[0], 0.75, max_relative = 1e-15);
        assert_relative_eq!(l[1], 25.0, max_relative = 1e-15);
        assert!(placement::observer_residual(1, t, &l, 0.5) < 1e-12);

        assert_eq!(dt_observer_gains_for_pole(1, 1.0, t).unwrap(), vec![0.0, 0.0]);

        let l = dt_observer_gains_for_pole(2, 0.5, 0.1).unwrap();
        assert_relative_eq!(l[0], 0.875, max_relative = 1e-15);
        assert_relative_eq!(l[1], 5.625, max_relative = 1e-14);
        assert_relative_eq!(l[2], 12.5, max_relative = 1e-14);
        assert!(placement::observer_residual(2, 0.1, &l, 0.5) < 1e-12);
    }

    #[test]
    fn dt_observer_gains_agree_with_numeric_placement() {
        for order in [1usize, 2] {
            for zeso in [0.999_9, 0.9, 0.5, 0.04] {
                let t = 0.002;
                let closed = dt_observer_gains_for_pole(order, zeso, t).unwrap();
                let numeric = placement::place_observer_poles(order, zeso, t).unwrap();
                for (a, b) in closed.iter().zip(&numeric) {
                    assert_relative_eq!(a, b, max_relative = 1e-7);
                }
            }
        }
    }

    #[test]
    fn higher_order_gains_are_placed() {
        for n in 3..=5 {
            for x in [1e-4, 1e-2, 0.5, 1.0] {
                let t = 1e-3;
                let d = design(n, x / t, 3.0, t);
                let k = dt_controller_gains(&d).unwrap();
                let l = dt_observer_gains(&d).unwrap();
                assert_eq!(k.len(), n);
                assert_eq!(l.len(), n + 1);
                assert!(k.iter().chain(&l).all(|g| *g > 0.0));
                let p = dt_pole_locations(&d);
                let vp = zoh::zoh_virtual_plant(n, t).unwrap();
                let mut a = vp.a.clone();
                for i in 0..n {
                    for j in 0..n {
                        a[(i, j)] -= vp.b[i] * k[j];
                    }
                }
                let cp = characteristic_polynomial(&a);
                assert!(max_abs_diff(&cp, &repeated_root(p.z_cl, n)) < 1e-9);
            }
        }
    }

    #[test]
    fn ratio_examples() {
        let r = ct_dt_gain_ratio(1, 0.05).unwrap();
        let oracle = 0.05 / (1.0 - (-0.05f64).exp());
        assert_relative_eq!(r[0], oracle, max_relative = 1e-12);
        assert!((r[0] - 1.025_21).abs() < 1e-5);
        assert!((ct_dt_gain_ratio(1, 1e-9).unwrap()[0] - 1.0).abs() < 1e-8);

        let r = ct_dt_gain_ratio(2, 0.5).unwrap();
        let z = (-0.5f64).exp();
        assert_relative_eq!(r[0], 0.25 / (1.0 - z).powi(2), max_relative = 1e-12);
        assert_relative_eq!(r[1], 2.0 / (4.0 - (1.0 + z).powi(2)), max_relative = 1e-12);
        assert!((r[0] - 1.614_798_042_892_390_5).abs() < 1e-12);
        assert!((r[1] - 1.409_384_431_928_995_9).abs() < 1e-12);

        assert!(ct_dt_gain_ratio(1, 0.0).is_err());
        assert!(ct_dt_gain_ratio(1, -1.0).is_err());
        assert!(ct_dt_gain_ratio(3, 0.1).is_err());
    }

    #[test]
    fn first_order_taylor_substitution_gives_ct_gain() {
        let t = 1e-3;
        let omega = 17.0;
        let k = dt_controller_gains_for_pole(1, 1.0 - omega * t, t).unwrap();
        assert_relative_eq!(k[0], omega, max_relative = 1e-12);
    }

    #[test]
    fn invalid_designs_rejected() {
        assert!(AdrcDesign::new(0, 1.0, 10.0, 5.0, 1e-3).is_err());
        assert!(AdrcDesign::new(1, 0.0, 10.0, 5.0, 1e-3).is_err());
        assert!(AdrcDesign::new(1, 1.0, 0.0, 5.0, 1e-3).is_err());
        assert!(AdrcDesign::new(1, 1.0, 10.0, 0.0, 1e-3).is_err());
        assert!(AdrcDesign::new(1, 1.0, 10.0, 5.0, 0.0).is_err());
        assert!(AdrcDesign::new(1, 1.0, f64::NAN, 5.0, 1e-3).is_err());
    }

    #[test]
    fn warnings_flag_coarse_sampling_and_aliasing() {
        assert!(design(1, 10.0, 10.0, 1e-3).warnings().is_empty());
        let w = design(1, 10.0, 10.0, 0.05).warnings();
        assert_eq!(w, vec![DesignWarning::CoarseSampling, DesignWarning::ObserverAliasing]);
        assert_eq!(design(1, 10.0, 1.0, 1e-3).warnings(), vec![DesignWarning::SlowObserver]);
    }

    #[test]
    fn gain_set_lengths() {
        for method in [
            TuningMethod::ContinuousTime,
            TuningMethod::DiscreteTime,
            TuningMethod::QuasiContinuous,
        ] {
            let g = GainSet::for_method(&design(3, 5.0, 4.0, 1e-2), method).unwrap();
            assert_eq!(g.k.len(), 3);
            assert_eq!(g.l.len(), 4);
            assert!(g.k.iter().chain(&g.l).all(|v| *v > 0.0));
        }
    }
}
