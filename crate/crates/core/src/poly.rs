//! Small helpers for real polynomials in the delay operator `x = z⁻¹`.
//!
//! Coefficient vectors are stored in ascending powers of `x`, so
//! `[1, a₁, …, a_m]` is `1 + a₁x + … + a_m x^m`. For a monic characteristic
//! polynomial `z^m + c₁z^(m−1) + … + c_m` the same vector describes
//! `det(zI − M) / z^m`, which is how transfer-function denominators are
//! written.

/// Binomial coefficient `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Coefficients of `(1 − p·x)^m`, i.e. of `(z − p)^m` normalized by `z^m`.
pub fn repeated_root(p: f64, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|k| binomial(m, k) * (-p).powi(k as i32))
        .collect()
}

pub fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Horner evaluation at `x`.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Divides `coeffs` by the factor `(1 − root·x)`.
///
/// Returns the quotient (one degree lower) and the remainder, which is zero
/// exactly when `z = root` is a root of the corresponding polynomial in `z`.
pub fn deflate(coeffs: &[f64], root: f64) -> (Vec<f64>, f64) {
    let Some((last, head)) = coeffs.split_last() else {
        return (Vec::new(), 0.0);
    };
    let mut quotient = Vec::with_capacity(head.len());
    let mut carry = 0.0;
    for d in head {
        carry = d + root * carry;
        quotient.push(carry);
    }
    (quotient, last + root * carry)
}

/// Largest absolute coefficient-wise difference; missing entries count as 0.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}
