use std::path::Path;

use adrc::controllers::{Controller, ControllerVariant, Structure};
use adrc::discretize::{TfCoefficients, TfVariant};
use adrc::export::{coefficients_from_csv, coefficients_from_json};
use adrc::sim::{run_keeping_controller, summarize, RunOptions, Scenario};

use crate::failure::Failure;
use crate::output::{emit, to_json};
use crate::{Format, SimulateArgs};

pub fn read_coefficients(path: &Path) -> Result<TfCoefficients, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|e| e == "csv") {
        coefficients_from_csv(&text)
    } else {
        coefficients_from_json(&text)
    };
    Ok(parsed?)
}

fn build_controller(args: &SimulateArgs, scenario: &Scenario) -> Result<Controller, Failure> {
    let signal = args.flavor.map_or(scenario.controller.signal, Into::into);
    let Some(path) = &args.coeffs else {
        let structure = args.variant.map_or(scenario.controller.structure, Into::into);
        return Ok(scenario.build_variant(ControllerVariant::new(structure, signal))?);
    };

    let coeffs = read_coefficients(path)?;
    let structure = match coeffs.variant {
        TfVariant::SingleTf => Structure::SingleTf,
        TfVariant::DualFeedback => Structure::DualFeedbackTf,
    };
    if let Some(v) = args.variant {
        if Structure::from(v) != structure {
            return Err(Failure::usage(format!(
                "--variant {} conflicts with {} coefficients in {}",
                Structure::from(v).as_str(),
                coeffs.variant.as_str(),
                path.display()
            )));
        }
    }
    if coeffs.design.sample_time != scenario.sample_time {
        return Err(Failure::usage(format!(
            "coefficients were computed for T = {} s but the scenario samples at {} s",
            coeffs.design.sample_time, scenario.sample_time
        )));
    }
    Ok(Controller::from_coefficients(&coeffs, signal, scenario.controller_options())?)
}

pub fn run(args: &SimulateArgs) -> Result<(), Failure> {
    let scenario = Scenario::load(&args.scenario)?;
    let controller = build_controller(args, &scenario)?;
    let variant = controller.variant();
    if variant.structure == Structure::SingleTf && scenario.is_saturating() {
        eprintln!(
            "warning: {variant} under a limiter: only the accumulator clamp protects against windup"
        );
    }
    let opts = RunOptions {
        ablate_windup: args.ablate_windup,
        record_observer: false,
    };

    let (trace, controller) = run_keeping_controller(&scenario, controller, opts)?;
    if let Some(path) = &args.snapshot {
        emit(Some(path), &controller.snapshot_json()?)?;
    }

    let text = match args.format {
        Format::Csv => trace.to_csv(),
        Format::Json => to_json(&trace)?,
    };
    emit(args.output.as_deref(), &text)?;

    let s = summarize(&trace);
    let settling = s.settling_time.map_or_else(|| "not reached".to_string(), |t| format!("{t:.6e} s"));
    let summary = format!(
        "{variant}: {} samples, settling (2%) {settling}, overshoot {:.3}%, max |u_lim| {:.6e}, saturation duty {:.2}%",
        trace.len(),
        s.overshoot_percent,
        s.max_abs_u_lim,
        100.0 * s.saturation_duty
    );
    if args.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}
