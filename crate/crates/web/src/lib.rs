//! WebAssembly bindings for the static demo page in `www/`. Every entry
//! point returns a JSON string; errors come back as a message string.

use cablesea::lti::RationalTf;
use cablesea::sea::{torque_plant, tune_pi, PiGains, SeaParams};
use cablesea::sim::{run_2dof, run_pd, run_velocity, NoiseSpec, PdController, Reference, Scenario, SimResult, Target};
use cablesea::synthesis::design;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Upper bound on points per returned trace.
const MAX_POINTS: usize = 800;

const PD: PdController = PdController {
    kp: 490.0,
    kd: 0.1,
    omega_f: 8e3,
};

fn published_plant() -> cablesea::Result<RationalTf> {
    let sea = SeaParams::nominal();
    let gains = PiGains::from_gains(&sea.motor, 0.26, 53.5, 0.88)?;
    torque_plant(&sea, &gains)
}

fn decimate(x: &[f64]) -> Vec<f64> {
    let stride = x.len().div_ceil(MAX_POINTS).max(1);
    x.iter().step_by(stride).copied().collect()
}

fn trace(r: &SimResult, name: &str) -> Vec<f64> {
    r.trace(name).map_or_else(Vec::new, |s| decimate(&s.samples))
}

fn time(sc: &Scenario) -> Vec<f64> {
    let t: Vec<f64> = (0..sc.samples()).map(|k| k as f64 * sc.dt).collect();
    decimate(&t)
}

fn metrics(r: &SimResult) -> Value {
    let m = &r.metrics;
    json!({
        "rise_time": m.rise_time,
        "overshoot": m.overshoot,
        "settling_time": m.settling_time,
        "rms_tracking_error": m.rms_tracking_error,
        "steady_state_error": m.steady_state_error,
    })
}

fn run(r: &SimResult) -> Value {
    json!({ "controller": r.controller, "z": trace(r, "z"), "metrics": metrics(r) })
}

/// PI gains for damping `xi` and the 1 rad/s velocity step.
pub fn velocity_step_value(xi: f64) -> cablesea::Result<Value> {
    let motor = SeaParams::nominal().motor;
    let g = tune_pi(&motor, xi)?;
    let sc = Scenario {
        target: Target::Velocity,
        ..Scenario::step("velocity", 1.0, 0.02, 1e-5)
    };
    let r = run_velocity(&motor, &g, &sc)?;
    Ok(json!({
        "kpv": g.kpv,
        "kiv": g.kiv,
        "omega_n": g.omega_n,
        "t": time(&sc),
        "r": trace(&r, "r"),
        "runs": [run(&r)],
    }))
}

/// 1 Nm torque step under the 2-DOF design for the given target dynamics,
/// next to the fixed PD controller.
pub fn torque_step_value(omega_bar: f64, xi_bar: f64) -> cablesea::Result<Value> {
    let plant = published_plant()?;
    let d = design(&plant, omega_bar, xi_bar, 50.0)?;
    let sc = Scenario::step("step", 1.0, 0.05, 1e-5);
    let a = run_2dof(&plant, &d.controller, &sc)?;
    let b = run_pd(&plant, &PD, &sc)?;
    Ok(json!({
        "j_star": d.stabilizer.j_star,
        "t": time(&sc),
        "r": trace(&a, "r"),
        "runs": [run(&a), run(&b)],
    }))
}

/// 1 Nm sinusoid with held Gaussian disturbance (0.05 rad/s) and
/// measurement noise of the given standard deviation.
pub fn noisy_sinusoid_value(freq_hz: f64, noise_std: f64, seed: u32) -> cablesea::Result<Value> {
    let plant = published_plant()?;
    let d = design(&plant, 451.24, 0.826, 50.0)?;
    let seed = u64::from(seed);
    let sc = Scenario {
        name: "sinusoid".into(),
        target: Target::Torque,
        reference: Reference::Sinusoid {
            amplitude: 1.0,
            freq_hz,
        },
        disturbance: NoiseSpec::Gaussian {
            std: 0.05,
            seed,
            hold: 1e-3,
        },
        noise: NoiseSpec::Gaussian {
            std: noise_std,
            seed: seed + 1,
            hold: 1e-3,
        },
        duration: (10.0 / freq_hz).max(0.5),
        dt: 1e-5,
    };
    let a = run_2dof(&plant, &d.controller, &sc)?;
    let b = run_pd(&plant, &PD, &sc)?;
    Ok(json!({
        "t": time(&sc),
        "r": trace(&a, "r"),
        "runs": [run(&a), run(&b)],
    }))
}

fn to_js(v: cablesea::Result<Value>) -> Result<String, String> {
    v.map(|v| v.to_string()).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = velocityStep)]
pub fn velocity_step(xi: f64) -> Result<String, String> {
    to_js(velocity_step_value(xi))
}

#[wasm_bindgen(js_name = torqueStep)]
pub fn torque_step(omega_bar: f64, xi_bar: f64) -> Result<String, String> {
    to_js(torque_step_value(omega_bar, xi_bar))
}

#[wasm_bindgen(js_name = noisySinusoid)]
pub fn noisy_sinusoid(freq_hz: f64, noise_std: f64, seed: u32) -> Result<String, String> {
    to_js(noisy_sinusoid_value(freq_hz, noise_std, seed))
}
