//! Lossless text formats for coefficients: JSON and `name,value` CSV.
//!
//! Every number is written with 17 significant digits, which round-trips
//! any `f64` exactly.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::discretize::{TfCoefficients, TfVariant};
use crate::tuning::AdrcDesign;
use crate::{AdrcError, Result};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Result<Box<RawValue>> {
    if !x.is_finite() {
        return Err(AdrcError::Io(format!("cannot serialize non-finite value {x}")));
    }
    RawValue::from_string(fmt17(x)).map_err(|e| AdrcError::Io(e.to_string()))
}

fn raw_all(xs: &[f64]) -> Result<Vec<Box<RawValue>>> {
    xs.iter().map(|x| raw(*x)).collect()
}

#[derive(Serialize)]
struct DesignOut {
    n: usize,
    b0: Box<RawValue>,
    omega_cl: Box<RawValue>,
    k_eso: Box<RawValue>,
    #[serde(rename = "T")]
    t: Box<RawValue>,
}

#[derive(Serialize)]
struct CoefficientsOut {
    design: DesignOut,
    variant: &'static str,
    alpha: Vec<Box<RawValue>>,
    beta: Vec<Box<RawValue>>,
    gamma: Vec<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k1_over_b0: Option<Box<RawValue>>,
}

fn to_out(c: &TfCoefficients) -> Result<CoefficientsOut> {
    let d = &c.design;
    Ok(CoefficientsOut {
        design: DesignOut {
            n: d.order,
            b0: raw(d.b0)?,
            omega_cl: raw(d.omega_cl)?,
            k_eso: raw(d.k_eso)?,
            t: raw(d.sample_time)?,
        },
        variant: c.variant.as_str(),
        alpha: raw_all(&c.alpha)?,
        beta: raw_all(&c.beta)?,
        gamma: raw_all(&c.gamma)?,
        k1_over_b0: c.k1_over_b0.map(raw).transpose()?,
    })
}

pub fn coefficients_to_json(c: &TfCoefficients) -> Result<String> {
    serde_json::to_string_pretty(&to_out(c)?).map_err(|e| AdrcError::Io(e.to_string()))
}

/// Closed-form and oracle coefficients side by side, as written by
/// `coeffs --check`.
pub fn check_report_to_json(closed_form: &TfCoefficients, oracle: &TfCoefficients, deviation: f64) -> Result<String> {
    #[derive(Serialize)]
    struct Report {
        closed_form: CoefficientsOut,
        oracle: CoefficientsOut,
        max_relative_deviation: Box<RawValue>,
    }
    let report = Report {
        closed_form: to_out(closed_form)?,
        oracle: to_out(oracle)?,
        max_relative_deviation: raw(deviation)?,
    };
    serde_json::to_string_pretty(&report).map_err(|e| AdrcError::Io(e.to_string()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoefficientsIn {
    Plain(TfCoefficients),
    Check { closed_form: TfCoefficients },
}

/// Reads either a plain coefficient document or a `--check` report (whose
/// closed-form half is used).
pub fn coefficients_from_json(text: &str) -> Result<TfCoefficients> {
    let parsed: CoefficientsIn =
        serde_json::from_str(text).map_err(|e| AdrcError::Io(format!("coefficient JSON: {e}")))?;
    let c = match parsed {
        CoefficientsIn::Plain(c) => c,
        CoefficientsIn::Check { closed_form } => closed_form,
    };
    c.design.validate()?;
    c.check_shape()?;
    Ok(c)
}

pub fn coefficients_to_csv(c: &TfCoefficients) -> String {
    let d = &c.design;
    let mut out = String::from("name,value\n");
    out.push_str(&format!("variant,{}\n", c.variant.as_str()));
    out.push_str(&format!("n,{}\n", d.order));
    for (name, v) in [("b0", d.b0), ("omega_cl", d.omega_cl), ("k_eso", d.k_eso), ("T", d.sample_time)] {
        out.push_str(&format!("{name},{}\n", fmt17(v)));
    }
    for (i, a) in c.alpha.iter().enumerate() {
        out.push_str(&format!("alpha{},{}\n", i + 1, fmt17(*a)));
    }
    for (prefix, values) in [("beta", &c.beta), ("gamma", &c.gamma)] {
        for (i, v) in values.iter().enumerate() {
            out.push_str(&format!("{prefix}{i},{}\n", fmt17(*v)));
        }
    }
    if let Some(k) = c.k1_over_b0 {
        out.push_str(&format!("k1_over_b0,{}\n", fmt17(k)));
    }
    out
}

pub fn coefficients_from_csv(text: &str) -> Result<TfCoefficients> {
    let bad = |msg: String| AdrcError::Io(format!("coefficient CSV: {msg}"));
    let mut variant = None;
    let mut order = None;
    let (mut b0, mut omega, mut k_eso, mut t) = (None, None, None, None);
    let (mut alpha, mut beta, mut gamma) = (Vec::new(), Vec::new(), Vec::new());
    let mut k1 = None;

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line == "name,value") {
            continue;
        }
        let (name, value) = line
            .split_once(',')
            .ok_or_else(|| bad(format!("line {} has no comma", lineno + 1)))?;
        let num = || {
            value
                .parse::<f64>()
                .map_err(|e| bad(format!("line {}: {e}", lineno + 1)))
        };
        let push_indexed = |vec: &mut Vec<f64>, idx: &str, first: usize| -> Result<()> {
            let i: usize = idx.parse().map_err(|_| bad(format!("bad index in `{name}`")))?;
            if i != vec.len() + first {
                return Err(bad(format!("`{name}` out of order")));
            }
            vec.push(num()?);
            Ok(())
        };
        match name {
            "variant" => variant = Some(value.parse::<TfVariant>()?),
            "n" => order = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "b0" => b0 = Some(num()?),
            "omega_cl" => omega = Some(num()?),
            "k_eso" => k_eso = Some(num()?),
            "T" => t = Some(num()?),
            "k1_over_b0" => k1 = Some(num()?),
            _ if name.starts_with("alpha") => push_indexed(&mut alpha, &name[5..], 1)?,
            _ if name.starts_with("beta") => push_indexed(&mut beta, &name[4..], 0)?,
            _ if name.starts_with("gamma") => push_indexed(&mut gamma, &name[5..], 0)?,
            _ => return Err(bad(format!("unknown row `{name}`"))),
        }
    }
    let missing = |what: &str| bad(format!("missing `{what}`"));
    let design = AdrcDesign::new(
        order.ok_or_else(|| missing("n"))?,
        b0.ok_or_else(|| missing("b0"))?,
        omega.ok_or_else(|| missing("omega_cl"))?,
        k_eso.ok_or_else(|| missing("k_eso"))?,
        t.ok_or_else(|| missing("T"))?,
    )?;
    let c = TfCoefficients {
        design,
        variant: variant.ok_or_else(|| missing("variant"))?,
        alpha,
        beta,
        gamma,
        k1_over_b0: k1,
    };
    c.check_shape()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::tf_coefficients_closed_form;

    fn sample(variant: TfVariant) -> TfCoefficients {
        let d = AdrcDesign::new(2, 1e4, 4000.0, 5.0, 2e-5).unwrap();
        tf_coefficients_closed_form(&d, variant).unwrap()
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.5), "-2.5000000000000000e0");
    }

    #[test]
    fn json_round_trip_is_exact() {
        for v in [TfVariant::SingleTf, TfVariant::DualFeedback] {
            let c = sample(v);
            let text = coefficients_to_json(&c).unwrap();
            assert_eq!(coefficients_from_json(&text).unwrap(), c);
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        for v in [TfVariant::SingleTf, TfVariant::DualFeedback] {
            let c = sample(v);
            assert_eq!(coefficients_from_csv(&coefficients_to_csv(&c)).unwrap(), c);
        }
    }

    #[test]
    fn check_report_reads_back_closed_form() {
        let c = sample(TfVariant::DualFeedback);
        let text = check_report_to_json(&c, &c, 0.0).unwrap();
        assert_eq!(coefficients_from_json(&text).unwrap(), c);
    }

    #[test]
    fn shape_errors_are_reported() {
        let mut c = sample(TfVariant::SingleTf);
        c.gamma.pop();
        let text = coefficients_to_json(&c).unwrap();
        assert!(matches!(coefficients_from_json(&text), Err(AdrcError::Dimension(_))));
    }
}
