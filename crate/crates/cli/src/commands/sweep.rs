use serde::Serialize;

use adrc::export::fmt17;
use adrc::tuning::ct_dt_gain_ratio;

use crate::failure::Failure;
use crate::output::{emit, to_json};
use crate::{Format, Spacing, SweepArgs};

#[derive(Debug, Serialize)]
struct Row {
    x: f64,
    ratio: Vec<f64>,
}

/// `points` abscissae from `xmin` to `xmax`, both endpoints exact.
pub fn grid(xmin: f64, xmax: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    if points == 1 {
        return vec![xmin];
    }
    let last = points - 1;
    (0..points)
        .map(|i| {
            if i == 0 {
                return xmin;
            }
            if i == last {
                return xmax;
            }
            let s = i as f64 / last as f64;
            match spacing {
                Spacing::Linear => xmin + s * (xmax - xmin),
                Spacing::Log => (xmin.ln() + s * (xmax / xmin).ln()).exp(),
            }
        })
        .collect()
}

pub fn run(args: &SweepArgs) -> Result<(), Failure> {
    if !(args.order == 1 || args.order == 2) {
        return Err(Failure::usage(format!("--order must be 1 or 2, got {}", args.order)));
    }
    if !(args.xmin.is_finite() && args.xmax.is_finite() && 0.0 < args.xmin && args.xmin < args.xmax) {
        return Err(Failure::usage(format!(
            "need 0 < xmin < xmax, got xmin = {}, xmax = {}",
            args.xmin, args.xmax
        )));
    }
    if args.points < 2 {
        return Err(Failure::usage("--points must be at least 2"));
    }

    let rows = grid(args.xmin, args.xmax, args.points, args.spacing)
        .into_iter()
        .map(|x| Ok(Row { x, ratio: ct_dt_gain_ratio(args.order, x)? }))
        .collect::<Result<Vec<_>, Failure>>()?;

    let text = match args.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from(if args.order == 1 { "x,ratio_k1\n" } else { "x,ratio_k1,ratio_k2\n" });
            for row in &rows {
                out.push_str(&fmt17(row.x));
                for r in &row.ratio {
                    out.push(',');
                    out.push_str(&fmt17(*r));
                }
                out.push('\n');
            }
            out
        }
    };
    emit(args.output.as_deref(), &text)
}
