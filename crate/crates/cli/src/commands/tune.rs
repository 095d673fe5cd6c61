use serde::Serialize;

use adrc::export::fmt17;
use adrc::tuning::{dt_pole_locations, AdrcDesign, DesignWarning, GainSet, TuningMethod};

use crate::failure::Failure;
use crate::output::{emit, name_value_csv, to_json};
use crate::{Format, TuneArgs};

#[derive(Debug, Serialize)]
struct GainReport {
    design: AdrcDesign,
    method: TuningMethod,
    k: Vec<f64>,
    l: Vec<f64>,
    z_cl: f64,
    z_eso: f64,
    omega_t: f64,
    warnings: Vec<DesignWarning>,
}

pub fn describe(w: DesignWarning) -> &'static str {
    match w {
        DesignWarning::CoarseSampling => "ω_CL·T > 0.1: continuous-time gains overestimate the discrete-time gains",
        DesignWarning::ObserverAliasing => "k_ESO·ω_CL·T ≥ π: observer pole is close to the origin",
        DesignWarning::SlowObserver => "k_ESO ≤ 1: observer is not faster than the closed loop",
    }
}

pub fn run(args: &TuneArgs) -> Result<(), Failure> {
    let design = args.design.design()?;
    let gains = GainSet::for_method(&design, args.method.into())?;
    let poles = dt_pole_locations(&design);
    let report = GainReport {
        design,
        method: gains.method,
        k: gains.k,
        l: gains.l,
        z_cl: poles.z_cl,
        z_eso: poles.z_eso,
        omega_t: design.relative_sample_time(),
        warnings: design.warnings(),
    };
    for w in &report.warnings {
        eprintln!("warning: {}", describe(*w));
    }

    let text = match args.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for (i, k) in report.k.iter().enumerate() {
                rows.push((format!("k{}", i + 1), fmt17(*k)));
            }
            for (i, l) in report.l.iter().enumerate() {
                rows.push((format!("l{}", i + 1), fmt17(*l)));
            }
            rows.push(("z_cl".into(), fmt17(report.z_cl)));
            rows.push(("z_eso".into(), fmt17(report.z_eso)));
            rows.push(("omega_t".into(), fmt17(report.omega_t)));
            for w in &report.warnings {
                let name = serde_json::to_value(w).ok().and_then(|v| v.as_str().map(str::to_owned));
                rows.push(("warning".into(), name.unwrap_or_default()));
            }
            name_value_csv(rows)
        }
    };
    emit(args.output.as_deref(), &text)
}
