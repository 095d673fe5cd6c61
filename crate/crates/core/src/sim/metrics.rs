use serde::{Deserialize, Serialize};

use super::trace::Trace;
use crate::{AdrcError, Result};

/// Time from `t[start]` until `y` last leaves the band
/// `|y − target| ≤ band·|target − y[start]|`; `None` if it never settles.
pub fn settling_time(t: &[f64], y: &[f64], start: usize, target: f64, band: f64) -> Option<f64> {
    let y0 = *y.get(start)?;
    let tol = band * (target - y0).abs();
    let last_out = (start..y.len()).rev().find(|&k| (y[k] - target).abs() > tol);
    match last_out {
        None => Some(0.0),
        Some(k) if k + 1 < y.len() => Some(t[k + 1] - t[start]),
        Some(_) => None,
    }
}

/// Peak excursion beyond `target` in percent of the step size from `y[start]`.
pub fn overshoot_percent(y: &[f64], start: usize, target: f64) -> f64 {
    let Some(&y0) = y.get(start) else {
        return 0.0;
    };
    let step = target - y0;
    if step == 0.0 {
        return 0.0;
    }
    let peak = y[start..]
        .iter()
        .map(|v| (v - target) * step.signum())
        .fold(0.0, f64::max);
    100.0 * peak / step.abs()
}

/// Settling time of `n` coincident real poles at `−ω` to within `band` of
/// a unit step: the root of `e^(−ωt)·Σ_{j<n}(ωt)^j/j! = band`.
pub fn coincident_pole_settling_time(n: usize, omega: f64, band: f64) -> f64 {
    let residual = |x: f64| {
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..n {
            term *= x / j as f64;
            sum += term;
        }
        (-x).exp() * sum - band
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while residual(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) / omega
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    /// 2% settling after the last reference change, if any.
    pub settling_time: Option<f64>,
    pub overshoot_percent: f64,
    pub max_abs_u_lim: f64,
    /// Fraction of samples with an active limiter bound.
    pub saturation_duty: f64,
}

pub fn summarize(tr: &Trace) -> TraceSummary {
    let last_change = (1..tr.len()).rev().find(|&k| tr.r[k] != tr.r[k - 1]).unwrap_or(0);
    let target = tr.r.last().copied().unwrap_or(0.0);
    let settling = if tr.is_empty() {
        None
    } else {
        settling_time(&tr.t, &tr.y_clean, last_change, target, 0.02)
    };
    let saturated = tr.lim_mag.iter().zip(&tr.lim_rate).filter(|(m, r)| **m || **r).count();
    TraceSummary {
        settling_time: settling,
        overshoot_percent: overshoot_percent(&tr.y_clean, last_change, target),
        max_abs_u_lim: tr.u_lim.iter().fold(0.0, |m, u| m.max(u.abs())),
        saturation_duty: if tr.is_empty() { 0.0 } else { saturated as f64 / tr.len() as f64 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceDiff {
    pub max_abs_du: f64,
    pub max_abs_dy: f64,
}

fn check_shapes(a: &Trace, b: &Trace) -> Result<()> {
    if a.sample_time != b.sample_time || a.len() != b.len() {
        return Err(AdrcError::Dimension(format!(
            "traces differ in shape: T {} vs {}, {} vs {} samples",
            a.sample_time,
            b.sample_time,
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Largest `|Δu_lim|` and `|Δy|` (clean output) over `t ∈ [t0, t1)`.
pub fn compare_traces(a: &Trace, b: &Trace, t0: f64, t1: f64) -> Result<TraceDiff> {
    check_shapes(a, b)?;
    let (start, end) = a.window(t0, t1);
    Ok(compare_range(a, b, start, end))
}

pub fn compare_range(a: &Trace, b: &Trace, start: usize, end: usize) -> TraceDiff {
    let mut d = TraceDiff { max_abs_du: 0.0, max_abs_dy: 0.0 };
    for k in start..end.min(a.len()).min(b.len()) {
        d.max_abs_du = d.max_abs_du.max((a.u_lim[k] - b.u_lim[k]).abs());
        d.max_abs_dy = d.max_abs_dy.max((a.y_clean[k] - b.y_clean[k]).abs());
    }
    d
}

/// Maximal index ranges `[start, end)` over which the effective (filtered)
/// reference has not changed since the window began, identically in both
/// traces.
pub fn constant_reference_windows(a: &Trace, b: &Trace) -> Result<Vec<(usize, usize)>> {
    check_shapes(a, b)?;
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=a.len() {
        let boundary = k == a.len()
            || a.r_filtered[k] != a.r_filtered[k - 1]
            || b.r_filtered[k] != b.r_filtered[k - 1]
            || a.r_filtered[k] != b.r_filtered[k];
        if boundary {
            if k - start >= 2 {
                out.push((start, k));
            }
            start = k;
        }
    }
    Ok(out)
}

/// Limiter soundness over a trace: magnitude bounds hold exactly and every
/// increment stays within `rate·T + slack`. Returns the worst violation.
pub fn limiter_violation(tr: &Trace, u_min: f64, u_max: f64, rate_max: f64, slack: f64) -> f64 {
    let mut worst: f64 = 0.0;
    let mut prev = 0.0;
    for &u in &tr.u_lim {
        worst = worst.max(u_min - u).max(u - u_max);
        worst = worst.max((u - prev).abs() - (rate_max * tr.sample_time + slack));
        prev = u;
    }
    worst
}
