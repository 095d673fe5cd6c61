use std::collections::VecDeque;

use super::noise::NoiseSource;
use super::plant::Plant;
use super::scenario::Scenario;
use super::trace::Trace;
use crate::controllers::{Controller, LimitFlags};
use crate::{AdrcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Feed the unlimited `u` back to the controller instead of `u_lim`
    /// (the windup ablation).
    pub ablate_windup: bool,
    /// Record the observer estimate of state-space controllers.
    pub record_observer: bool,
}

/// Runs the scenario with the controller it describes.
pub fn run_scenario(s: &Scenario) -> Result<Trace> {
    let c = s.build_controller()?;
    run_with(s, c, RunOptions::default())
}

pub fn run_with(s: &Scenario, controller: Controller, opts: RunOptions) -> Result<Trace> {
    let mut traces = run_lockstep(s, vec![controller], opts)?;
    Ok(traces.pop().expect("one trace per controller"))
}

struct Loop {
    controller: Controller,
    plant: Plant,
    delay: VecDeque<f64>,
    u_lim_prev: f64,
    trace: Trace,
}

/// Runs several closed loops side by side on one scenario; every loop sees
/// the same reference, events and noise sample at each step.
pub fn run_lockstep(s: &Scenario, controllers: Vec<Controller>, opts: RunOptions) -> Result<Vec<Trace>> {
    Ok(run_loops(s, controllers, opts)?.into_iter().map(|lp| lp.trace).collect())
}

/// Like [`run_with`], also handing back the controller in its final state.
pub fn run_keeping_controller(s: &Scenario, controller: Controller, opts: RunOptions) -> Result<(Trace, Controller)> {
    let lp = run_loops(s, vec![controller], opts)?.pop().expect("one loop per controller");
    Ok((lp.trace, lp.controller))
}

fn run_loops(s: &Scenario, controllers: Vec<Controller>, opts: RunOptions) -> Result<Vec<Loop>> {
    s.validate()?;
    let t = s.sample_time;
    let n = s.samples();
    let guard = s.divergence_guard.unwrap_or(1e6 * s.reference_scale());
    let mut loops = controllers
        .into_iter()
        .map(|controller| {
            let mut trace = Trace::with_capacity(t, n);
            if opts.record_observer && controller.observer_state().is_some() {
                trace.xhat = Some(Vec::with_capacity(n));
            }
            Ok(Loop {
                controller,
                plant: Plant::build(&s.plant, t)?,
                delay: VecDeque::from(vec![0.0; s.delay_samples]),
                u_lim_prev: 0.0,
                trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut noise = s.noise.map(|ns| NoiseSource::new(ns.sigma, ns.seed));
    let filter_gain = s
        .setpoint_filter
        .map(|f| -(-t / f.time_constant).exp_m1());
    let event_samples: Vec<usize> = s.events.iter().map(|e| s.event_sample(e.time)).collect();
    let mut next_event = 0;
    let (mut r, mut load, mut d_in, mut d_out) = (0.0, 0.0, 0.0, 0.0);
    let mut r_filtered: Option<f64> = None;

    for k in 0..n {
        while next_event < s.events.len() && event_samples[next_event] <= k {
            let e = &s.events[next_event];
            r = e.setpoint.unwrap_or(r);
            load = e.load.unwrap_or(load);
            d_in = e.input_disturbance.unwrap_or(d_in);
            d_out = e.output_disturbance.unwrap_or(d_out);
            next_event += 1;
        }
        // The filter starts at rest on r(0).
        let rf = match (filter_gain, r_filtered) {
            (None, _) => r,
            (Some(_), None) => r,
            (Some(a), Some(prev)) => prev + a * (r - prev),
        };
        r_filtered = Some(rf);
        let eta = noise.as_mut().map_or(0.0, NoiseSource::sample);
        let tk = k as f64 * t;

        for lp in loops.iter_mut() {
            let y_clean = lp.plant.output() + d_out;
            if !y_clean.is_finite() || y_clean.abs() > guard {
                return Err(AdrcError::Diverged { sample: k, value: y_clean.abs() });
            }
            let y_meas = y_clean + eta;
            let u = lp.controller.step(rf, y_meas)?;
            let (u_lim, flags) = match &s.limiter {
                Some(l) => l.apply(u, lp.u_lim_prev, t),
                None => (u, LimitFlags::default()),
            };
            lp.controller.commit(if opts.ablate_windup { u } else { u_lim })?;
            lp.u_lim_prev = u_lim;

            lp.delay.push_back(u_lim);
            let applied = lp.delay.pop_front().unwrap_or(u_lim);
            lp.plant.step(applied, d_in, load);

            let tr = &mut lp.trace;
            tr.t.push(tk);
            tr.r.push(r);
            tr.r_filtered.push(rf);
            tr.y_clean.push(y_clean);
            tr.y_measured.push(y_meas);
            tr.u.push(u);
            tr.u_lim.push(u_lim);
            tr.lim_mag.push(flags.magnitude);
            tr.lim_rate.push(flags.rate);
            if let (Some(xs), Some(x)) = (tr.xhat.as_mut(), lp.controller.observer_state()) {
                xs.push(x.to_vec());
            }
        }
    }
    Ok(loops)
}
