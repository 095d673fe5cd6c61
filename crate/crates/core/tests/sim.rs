use std::path::Path;

use adrc::controllers::{ControllerVariant, Signal, Structure};
use adrc::sim::metrics::{coincident_pole_settling_time, limiter_violation, settling_time};
use adrc::sim::*;
use adrc::tuning::TuningMethod;
use adrc::AdrcError;

fn bundled(name: &str) -> Scenario {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    Scenario::load(&path).unwrap()
}

fn first_order(t: f64, structure: Structure, signal: Signal) -> Scenario {
    let mut s = bundled("first_order_step.toml");
    s.sample_time = t;
    s.controller.structure = structure;
    s.controller.signal = signal;
    s
}

#[test]
fn bundled_buck_matches_builder() {
    assert_eq!(bundled("buck.toml"), make_buck_scenario());
}

#[test]
fn buck_constants() {
    let s = make_buck_scenario();
    assert_eq!(s.sample_time, 2e-5);
    assert_eq!(s.controller.b0, 1e4);
    assert!(s.events.iter().any(|e| e.load.is_some_and(|l| l > 6.0) && e.time == 0.010));
    assert_eq!(s.samples(), 2001);
}

#[test]
fn scenario_survives_toml_round_trip() {
    let s = make_buck_scenario();
    let text = s.to_toml_string().unwrap();
    assert_eq!(Scenario::from_toml_str(&text).unwrap(), s);
}

#[test]
fn quiet_scenario_gives_zero_trace() {
    let mut s = make_buck_scenario();
    s.events.clear();
    s.noise = None;
    let tr = run_scenario(&s).unwrap();
    assert_eq!(tr.len(), s.samples());
    for k in 0..tr.len() {
        assert_eq!(
            [tr.r[k], tr.r_filtered[k], tr.y_clean[k], tr.y_measured[k], tr.u[k], tr.u_lim[k]],
            [0.0; 6]
        );
    }
}

#[test]
fn identical_seeds_give_identical_files() {
    let s = make_buck_scenario();
    for v in ControllerVariant::all() {
        let a = run_scenario(&s.with_variant(v)).unwrap().to_csv();
        let b = run_scenario(&s.with_variant(v)).unwrap().to_csv();
        assert_eq!(a, b, "{v}");
    }
    let mut other = s.clone();
    other.noise.as_mut().unwrap().seed += 1;
    assert_ne!(run_scenario(&s).unwrap().to_csv(), run_scenario(&other).unwrap().to_csv());
}

#[test]
fn limiter_holds_on_every_buck_trace() {
    let s = make_buck_scenario();
    for v in ControllerVariant::all() {
        let tr = run_scenario(&s.with_variant(v)).unwrap();
        assert!(limiter_violation(&tr, 0.0, 6.0, 20_000.0, 1e-15) <= 0.0, "{v}");
    }
}

#[test]
fn buck_sequence() {
    let s = make_buck_scenario();
    let tr = run_scenario(&s).unwrap();
    // saturated during the overload, not during the calm full-load phase
    let (a, b) = tr.window(0.010, 0.012);
    assert!(tr.lim_mag[a + 10..b].iter().filter(|f| **f).count() > (b - a) / 2);
    let (c, d) = tr.window(0.020, 0.040);
    assert!(tr.lim_mag[c..d].iter().all(|f| !f));
    // full-load steady state sits within the noise floor
    let worst = (c..d).map(|k| (tr.y_clean[k] - tr.r_filtered[k]).abs()).fold(0.0, f64::max);
    assert!(worst < 0.1, "steady-state deviation {worst}");
    // the current command covers the 3 A load plus the base load
    let mean_u = tr.u_lim[c..d].iter().sum::<f64>() / (d - c) as f64;
    assert!((mean_u - 3.1).abs() < 0.05, "mean current {mean_u}");
}

#[test]
fn output_and_error_based_differ_while_tracking() {
    let s = make_buck_scenario();
    let cs = vec![
        s.build_variant(ControllerVariant::new(Structure::DualFeedbackTf, Signal::OutputBased)).unwrap(),
        s.build_variant(ControllerVariant::new(Structure::DualFeedbackTf, Signal::ErrorBased)).unwrap(),
    ];
    let tr = run_lockstep(&s, cs, RunOptions::default()).unwrap();
    let load_step = compare_traces(&tr[0], &tr[1], 0.004, 0.006).unwrap();
    assert!(load_step.max_abs_du <= 1e-9);
    let tracking = compare_traces(&tr[0], &tr[1], 0.006, 0.009).unwrap();
    assert!(tracking.max_abs_dy > 1e-3);
}

#[test]
fn zoh_plant_matches_continuous_step() {
    let t = 0.01;
    let spec = PlantSpec::FirstOrder { gain: 1.0, time_constant: 1.0, initial_output: 0.0 };
    let mut plant = Plant::build(&spec, t).unwrap();
    for k in 0..1000 {
        let exact = 1.0 - (-(k as f64) * t).exp();
        assert!((plant.output() - exact).abs() < 1e-12);
        plant.step(1.0, 0.0, 0.0);
    }
}

#[test]
fn dt_tuned_loop_settles_like_coincident_poles() {
    // exact model: the loop from r to y is the placed state-feedback loop
    for (n, omega) in [(1usize, 10.0), (2, 10.0)] {
        let mut s = first_order(0.01, Structure::StateSpace, Signal::OutputBased);
        s.plant = PlantSpec::IntegratorChain { order: n, gain: 1.0 };
        s.controller.n = n;
        s.controller.omega_cl = omega;
        s.duration = 3.0;
        let tr = run_scenario(&s).unwrap();
        let ts = settling_time(&tr.t, &tr.y_clean, 0, 1.0, 0.02).unwrap();
        let analytic = coincident_pole_settling_time(n, omega, 0.02);
        assert!((ts / analytic - 1.0).abs() < 0.15, "n={n}: {ts} vs {analytic}");
    }
}

#[test]
fn constant_disturbance_is_rejected_by_all_variants() {
    for v in ControllerVariant::all() {
        let mut s = first_order(0.01, v.structure, v.signal);
        s.duration = 5.0;
        s.events.push(Event::input_disturbance(3.0, 0.5));
        let tr = run_scenario(&s).unwrap();
        let (a, _) = tr.window(3.0 + 10.0 / s.controller.omega_cl, 5.0);
        let worst = tr.y_clean[a..].iter().map(|y| (y - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{v}: {worst:e}");
    }
}

#[test]
fn windup_ablation_overshoots_more() {
    let s = make_buck_scenario();
    let (k12, _) = run_scenario(&s).unwrap().window(0.012, 1.0);
    let overshoot = |tr: &Trace| (k12..tr.len()).map(|k| tr.y_clean[k] - tr.r_filtered[k]).fold(f64::MIN, f64::max);
    for structure in [Structure::StateSpace, Structure::DualFeedbackTf] {
        let c = s.build_variant(ControllerVariant::new(structure, Signal::ErrorBased)).unwrap();
        let fed = run_with(&s, c.clone(), RunOptions::default()).unwrap();
        let ablated = run_with(&s, c, RunOptions { ablate_windup: true, ..Default::default() }).unwrap();
        assert!(overshoot(&fed) < overshoot(&ablated));
    }
}

#[test]
fn quasi_continuous_gains_diverge_on_coarse_sampling() {
    let mut s = first_order(0.3, Structure::StateSpace, Signal::OutputBased);
    s.plant = PlantSpec::IntegratorChain { order: 1, gain: 1.0 };
    s.controller.tuning = TuningMethod::ContinuousTime;
    s.duration = 200.0;
    match run_scenario(&s) {
        Err(AdrcError::Diverged { sample, .. }) => assert!(sample > 0),
        other => panic!("expected divergence, got {:?}", other.map(|t| t.len())),
    }
}

#[test]
fn observer_trace_is_recorded_on_request() {
    let s = first_order(0.01, Structure::StateSpace, Signal::OutputBased);
    let c = s.build_controller().unwrap();
    let tr = run_with(&s, c, RunOptions { record_observer: true, ..Default::default() }).unwrap();
    let xs = tr.xhat.unwrap();
    assert_eq!(xs.len(), tr.t.len());
    assert!((xs.last().unwrap()[0] - 1.0).abs() < 1e-6);
}

#[test]
fn malformed_scenarios_are_rejected() {
    let mut s = make_buck_scenario();
    s.events.swap(0, 1);
    assert!(matches!(s.validate(), Err(AdrcError::Scenario(_))));
    assert!(Scenario::from_toml_str("duration = 1.0").is_err());
    let mut s = make_buck_scenario();
    s.controller.omega_cl = 0.0;
    assert!(s.validate().is_err());
}
