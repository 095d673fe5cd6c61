use adrc::discretize::{tf_coefficients_closed_form, tf_coefficients_oracle, TfCoefficients};
use adrc::export::{check_report_to_json, coefficients_to_csv, coefficients_to_json, fmt17};
use adrc::tuning::{GainSet, TuningMethod};
use adrc::AdrcError;

use crate::failure::Failure;
use crate::output::emit;
use crate::{CoeffsArgs, Format};

/// Entries smaller than this are compared absolutely in `--check`, which
/// makes the reported deviation ≤ 1e-9 equivalent to agreement within
/// 1e-9 relative or 1e-12 absolute.
pub const CHECK_FLOOR: f64 = 1e-3;

pub fn run(args: &CoeffsArgs) -> Result<(), Failure> {
    let design = args.design.design()?;
    let variant = args.variant.into();
    let method: TuningMethod = args.method.into();

    let closed_form = || -> Result<TfCoefficients, Failure> {
        if method != TuningMethod::DiscreteTime {
            return Err(Failure::usage("closed-form coefficients assume discrete-time tuning; use --via-oracle"));
        }
        tf_coefficients_closed_form(&design, variant).map_err(|e| match e {
            AdrcError::UnsupportedOrder(n) => Failure::usage(format!(
                "closed-form coefficients exist for order 1 and 2 only (got {n}); pass --via-oracle"
            )),
            other => other.into(),
        })
    };

    let text = if args.check {
        let closed = closed_form()?;
        let gains = GainSet::for_method(&design, method)?;
        let oracle = tf_coefficients_oracle(&design, &gains.k, &gains.l, variant)?;
        let dev = closed.max_relative_deviation(&oracle, CHECK_FLOOR);
        eprintln!("max relative deviation: {dev:e}");
        match args.format {
            Format::Json => check_report_to_json(&closed, &oracle, dev)?,
            Format::Csv => {
                let mut csv = coefficients_to_csv(&closed);
                for line in coefficients_to_csv(&oracle).lines().skip(1) {
                    csv.push_str("oracle_");
                    csv.push_str(line);
                    csv.push('\n');
                }
                csv.push_str(&format!("max_relative_deviation,{}\n", fmt17(dev)));
                csv
            }
        }
    } else {
        let coeffs = if args.via_oracle {
            let gains = GainSet::for_method(&design, method)?;
            tf_coefficients_oracle(&design, &gains.k, &gains.l, variant)?
        } else {
            closed_form()?
        };
        match args.format {
            Format::Json => coefficients_to_json(&coeffs)?,
            Format::Csv => coefficients_to_csv(&coeffs),
        }
    };
    emit(args.output.as_deref(), &text)
}
