use serde::{Deserialize, Serialize};

/// SISO IIR filter `Σbᵢz⁻ⁱ / (1 + Σaᵢz⁻ⁱ)` in transposed direct form II.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Df2t {
    /// Numerator `b₀ … b_N`.
    pub num: Vec<f64>,
    /// Denominator `a₁ … a_N` (leading 1 implied).
    pub den: Vec<f64>,
    pub state: Vec<f64>,
}

impl Df2t {
    /// Pads numerator and denominator to a common order `N`.
    pub fn new(num: &[f64], den: &[f64]) -> Self {
        let order = (num.len().max(1) - 1).max(den.len());
        let mut b = num.to_vec();
        b.resize(order + 1, 0.0);
        let mut a = den.to_vec();
        a.resize(order, 0.0);
        Df2t {
            num: b,
            den: a,
            state: vec![0.0; order],
        }
    }

    pub fn step(&mut self, x: f64) -> f64 {
        let n = self.state.len();
        let y = self.num[0] * x + self.state.first().copied().unwrap_or(0.0);
        for i in 0..n {
            let next = if i + 1 < n { self.state[i + 1] } else { 0.0 };
            self.state[i] = next + self.num[i + 1] * x - self.den[i] * y;
        }
        y
    }

    pub fn dc_gain(&self) -> f64 {
        self.num.iter().sum::<f64>() / (1.0 + self.den.iter().sum::<f64>())
    }

    /// Loads the state reached after an infinitely long constant input `x`.
    pub fn settle_at(&mut self, x: f64) {
        let y = x * self.dc_gain();
        let n = self.state.len();
        let mut acc = 0.0;
        for i in (0..n).rev() {
            acc += self.num[i + 1] * x - self.den[i] * y;
            self.state[i] = acc;
        }
    }

    pub fn reset(&mut self) {
        self.state.iter_mut().for_each(|w| *w = 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_response_of_first_order_section() {
        // 1 / (1 − 0.5 z⁻¹)
        let mut f = Df2t::new(&[1.0], &[-0.5]);
        let out: Vec<f64> = [1.0, 0.0, 0.0, 0.0].iter().map(|x| f.step(*x)).collect();
        assert_eq!(out, vec![1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn pure_delay() {
        let mut f = Df2t::new(&[0.0, 0.0, 1.0], &[]);
        let out: Vec<f64> = [3.0, 4.0, 5.0, 6.0].iter().map(|x| f.step(*x)).collect();
        assert_eq!(out, vec![0.0, 0.0, 3.0, 4.0]);
    }

    #[test]
    fn settled_state_is_a_fixed_point() {
        let mut f = Df2t::new(&[0.2, -0.1, 0.05], &[-1.2, 0.36]);
        f.settle_at(2.0);
        let expected = 2.0 * f.dc_gain();
        for _ in 0..5 {
            assert!((f.step(2.0) - expected).abs() < 1e-14);
        }
    }
}
