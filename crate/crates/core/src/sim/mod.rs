//! Time-domain experiments: velocity-loop step, torque step tracking and
//! noisy sinusoid tracking with a PD baseline.

mod report;

use std::f64::consts::PI;
use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::lti::{step_metrics, Diagram, Port, RationalTf};
use crate::polynomial::Polynomial;
use crate::sea::{velocity_plant, MotorParams, PiGains};
use crate::synthesis::TwoDofController;

pub use report::{compare, format_float, Comparison};

/// Traces larger than this multiple of the reference amplitude count as
/// divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// Physical unit of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Nm,
    RadPerSec,
    Volt,
}

impl Unit {
    pub fn label(self) -> &'static str {
        match self {
            Unit::Nm => "Nm",
            Unit::RadPerSec => "rad/s",
            Unit::Volt => "V",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Uniformly sampled trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub name: String,
    pub unit: Unit,
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl Signal {
    pub fn new(name: &str, unit: Unit, dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || samples.is_empty() {
            return Err(Error::BadSpec(format!("signal {name} needs dt > 0 and samples")));
        }
        Ok(Self {
            name: name.to_string(),
            unit,
            dt,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Reference generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Step { amplitude: f64 },
    Sinusoid { amplitude: f64, freq_hz: f64 },
}

impl Reference {
    pub fn amplitude(&self) -> f64 {
        match *self {
            Reference::Step { amplitude } | Reference::Sinusoid { amplitude, .. } => amplitude,
        }
    }
}

/// Additive noise source. Gaussian samples come from ChaCha8 seeded with
/// `seed` through `seed_from_u64`, mapped by the ziggurat standard normal,
/// scaled by `std`, and held for `hold` seconds (`hold = 0` draws a fresh
/// value every step).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Off,
    Gaussian { std: f64, seed: u64, hold: f64 },
}

/// Which loop a scenario exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Outer torque loop: reference, traces and errors in Nm.
    Torque,
    /// Inner PI velocity loop: reference in rad/s.
    Velocity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub target: Target,
    pub reference: Reference,
    pub disturbance: NoiseSpec,
    pub noise: NoiseSpec,
    pub duration: f64,
    pub dt: f64,
}

impl Scenario {
    /// Clean torque step.
    pub fn step(name: &str, amplitude: f64, duration: f64, dt: f64) -> Self {
        Self {
            name: name.to_string(),
            target: Target::Torque,
            reference: Reference::Step { amplitude },
            disturbance: NoiseSpec::Off,
            noise: NoiseSpec::Off,
            duration,
            dt,
        }
    }

    /// Number of samples, including `t = 0`.
    pub fn samples(&self) -> usize {
        (self.duration / self.dt).round() as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadSpec(format!("{}: {m}", self.name)));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.duration >= self.dt) || !self.duration.is_finite() {
            return bad(format!("duration must be at least dt, got {}", self.duration));
        }
        let amplitude = self.reference.amplitude();
        if !amplitude.is_finite() {
            return bad("reference amplitude must be finite".into());
        }
        if let Reference::Sinusoid { freq_hz, .. } = self.reference {
            if !(freq_hz > 0.0) || !freq_hz.is_finite() {
                return bad(format!("frequency must be positive, got {freq_hz}"));
            }
            if self.duration * freq_hz < 10.0 - 1e-9 {
                return bad(format!(
                    "duration {} s covers fewer than 10 periods at {freq_hz} Hz",
                    self.duration
                ));
            }
        }
        for (label, spec) in [("disturbance", self.disturbance), ("noise", self.noise)] {
            if let NoiseSpec::Gaussian { std, hold, .. } = spec {
                if !(std >= 0.0) || !std.is_finite() || !(hold >= 0.0) || !hold.is_finite() {
                    return bad(format!("{label} needs std >= 0 and hold >= 0"));
                }
            }
        }
        Ok(())
    }

    /// Units of (reference, disturbance, noise, controller output, plant
    /// input, measurement, output).
    fn units(&self) -> [Unit; 7] {
        match self.target {
            Target::Torque => [
                Unit::Nm,
                Unit::RadPerSec,
                Unit::Nm,
                Unit::RadPerSec,
                Unit::RadPerSec,
                Unit::Nm,
                Unit::Nm,
            ],
            Target::Velocity => [
                Unit::RadPerSec,
                Unit::Volt,
                Unit::RadPerSec,
                Unit::Volt,
                Unit::Volt,
                Unit::RadPerSec,
                Unit::RadPerSec,
            ],
        }
    }
}

/// Exogenous inputs of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Inputs {
    pub r: Signal,
    pub d: Signal,
    pub n: Signal,
}

fn noise_trace(spec: NoiseSpec, len: usize, dt: f64) -> Vec<f64> {
    match spec {
        NoiseSpec::Off => vec![0.0; len],
        NoiseSpec::Gaussian { std, seed, hold } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let steps = ((hold / dt).round() as usize).max(1);
            let mut out = Vec::with_capacity(len);
            let mut value = 0.0;
            for k in 0..len {
                if k % steps == 0 {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    value = std * z;
                }
                out.push(value);
            }
            out
        }
    }
}

/// Reference, disturbance and noise traces of a scenario.
pub fn generate(sc: &Scenario) -> Result<Inputs> {
    sc.validate()?;
    let len = sc.samples();
    let dt = sc.dt;
    let r = match sc.reference {
        Reference::Step { amplitude } => vec![amplitude; len],
        Reference::Sinusoid { amplitude, freq_hz } => (0..len)
            .map(|k| amplitude * (2.0 * PI * freq_hz * k as f64 * dt).sin())
            .collect(),
    };
    let [ur, ud, un, ..] = sc.units();
    Ok(Inputs {
        r: Signal::new("r", ur, dt, r)?,
        d: Signal::new("d", ud, dt, noise_trace(sc.disturbance, len, dt))?,
        n: Signal::new("n", un, dt, noise_trace(sc.noise, len, dt))?,
    })
}

/// Scalar figures of a run. Step figures are present for step references
/// that settle; errors are measured on the output `z` against `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub rise_time: Option<f64>,
    pub overshoot: Option<f64>,
    pub settling_time: Option<f64>,
    /// RMS of `z - r` after the first 20% of the run.
    pub rms_tracking_error: f64,
    /// `|mean(z - r)|` over the final 10% of the run.
    pub steady_state_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub controller: String,
    pub scenario: Scenario,
    /// `r, d, n, u, v, y, z`, all sharing `dt` and length.
    pub traces: Vec<Signal>,
    pub metrics: Metrics,
}

impl SimResult {
    pub fn trace(&self, name: &str) -> Option<&Signal> {
        self.traces.iter().find(|s| s.name == name)
    }

    /// Output trace `z`.
    pub fn z(&self) -> &[f64] {
        &self.traces[6].samples
    }

    /// Reference trace `r`.
    pub fn r(&self) -> &[f64] {
        &self.traces[0].samples
    }

    pub fn to_csv(&self) -> String {
        report::to_csv(&self.traces)
    }

    pub fn metrics_text(&self) -> String {
        report::metrics_text(self)
    }
}

fn metrics(sc: &Scenario, r: &[f64], z: &[f64]) -> Metrics {
    let len = z.len();
    let start = (len as f64 * 0.2) as usize;
    let err: Vec<f64> = z.iter().zip(r).map(|(z, r)| z - r).collect();
    let tail = &err[start..];
    let rms = (tail.iter().map(|e| e * e).sum::<f64>() / tail.len() as f64).sqrt();
    let last = &err[(len as f64 * 0.9) as usize..];
    let sse = (last.iter().sum::<f64>() / last.len() as f64).abs();
    let step = match sc.reference {
        Reference::Step { amplitude } if amplitude != 0.0 => step_metrics(z, sc.dt, amplitude).ok(),
        _ => None,
    };
    Metrics {
        rise_time: step.map(|m| m.rise_time),
        overshoot: step.map(|m| m.overshoot),
        settling_time: step.map(|m| m.settling_time),
        rms_tracking_error: rms,
        steady_state_error: sse,
    }
}

/// Simulates a diagram with inputs `(r, d, n)` and outputs `(u, v, y, z)`.
fn run_diagram(diagram: &Diagram, sc: &Scenario, controller: &str) -> Result<SimResult> {
    let inputs = generate(sc)?;
    let system = diagram.build()?;
    let out = system.simulate_mimo(&[&inputs.r.samples, &inputs.d.samples, &inputs.n.samples], sc.dt)?;
    let guard = DIVERGENCE_FACTOR * sc.reference.amplitude().abs().max(1.0);
    let names = ["u", "v", "y", "z"];
    for (name, trace) in names.iter().zip(&out) {
        if trace.iter().any(|v| !v.is_finite() || v.abs() > guard) {
            return Err(Error::UnstableLoop((*name).to_string()));
        }
    }
    let units = sc.units();
    let mut traces = vec![inputs.r, inputs.d, inputs.n];
    for (k, (name, samples)) in names.iter().zip(out).enumerate() {
        traces.push(Signal::new(name, units[3 + k], sc.dt, samples)?);
    }
    let metrics = metrics(sc, &traces[0].samples, &traces[6].samples);
    Ok(SimResult {
        controller: controller.to_string(),
        scenario: sc.clone(),
        traces,
        metrics,
    })
}

const R: Port = Port::Input(0);
const D: Port = Port::Input(1);
const N: Port = Port::Input(2);

/// Adds the plant with `v = u + d` and returns its block; outputs are
/// declared as `u, v, y = z + n, z`.
fn close_plant(dg: &mut Diagram, plant: &RationalTf, u: Port) -> Result<usize> {
    let p = dg.add_block(plant)?;
    dg.connect(u, p, 1.0).connect(D, p, 1.0);
    dg.add_output(&[(u, 1.0)]);
    dg.add_output(&[(u, 1.0), (D, 1.0)]);
    dg.add_output(&[(Port::Block(p), 1.0), (N, 1.0)]);
    dg.add_output(&[(Port::Block(p), 1.0)]);
    Ok(p)
}

/// 2-DOF loop with the controller in factored form:
/// `u = X^-1 [Q1 r - Y y + Q2 (N u - M y)]`.
pub fn run_2dof(plant: &RationalTf, ctl: &TwoDofController, sc: &Scenario) -> Result<SimResult> {
    let f = &ctl.factors;
    let x_inv = RationalTf::unreduced(f.d().clone(), f.x.num().clone())?;
    let mut dg = Diagram::new(3);
    let xi = dg.add_block(&x_inv)?;
    let q1 = dg.add_block(&ctl.q1)?;
    let y = dg.add_block(&f.y)?;
    let n = dg.add_block(&f.n)?;
    let m = dg.add_block(&f.m)?;
    let q2 = dg.add_block(&ctl.q2)?;
    let u = Port::Block(xi);
    let p = close_plant(&mut dg, plant, u)?;
    let meas = [(Port::Block(p), 1.0), (N, 1.0)];
    dg.connect(R, q1, 1.0);
    for (port, gain) in meas {
        dg.connect(port, y, gain).connect(port, m, gain);
    }
    dg.connect(u, n, 1.0)
        .connect(Port::Block(n), q2, 1.0)
        .connect(Port::Block(m), q2, -1.0)
        .connect(Port::Block(q1), xi, 1.0)
        .connect(Port::Block(y), xi, -1.0)
        .connect(Port::Block(q2), xi, 1.0);
    run_diagram(&dg, sc, "2dof")
}

/// `kp + kd s` with the derivative rolled off at `omega_f` rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdController {
    pub kp: f64,
    pub kd: f64,
    pub omega_f: f64,
}

impl PdController {
    /// `kp + kd s / (s / omega_f + 1)`.
    pub fn tf(&self) -> Result<RationalTf> {
        if !(self.omega_f > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "roll-off must be positive, got {}",
                self.omega_f
            )));
        }
        let tau = 1.0 / self.omega_f;
        RationalTf::unreduced(
            Polynomial::new(vec![self.kp * tau + self.kd, self.kp]),
            Polynomial::new(vec![tau, 1.0]),
        )
    }
}

/// Unity-feedback loop `u = C (r - y)`.
pub fn run_pd(plant: &RationalTf, pd: &PdController, sc: &Scenario) -> Result<SimResult> {
    let mut dg = Diagram::new(3);
    let c = dg.add_block(&pd.tf()?)?;
    let p = close_plant(&mut dg, plant, Port::Block(c))?;
    dg.connect(R, c, 1.0)
        .connect(Port::Block(p), c, -1.0)
        .connect(N, c, -1.0);
    run_diagram(&dg, sc, "pd")
}

/// PI velocity loop `u = (Kpv + Kiv / s)(r - y)` around the motor; `u` is the
/// terminal voltage and `z` the motor velocity.
pub fn run_velocity(motor: &MotorParams, gains: &PiGains, sc: &Scenario) -> Result<SimResult> {
    if sc.target != Target::Velocity {
        return Err(Error::BadSpec(format!("{} is not a velocity scenario", sc.name)));
    }
    let pi = RationalTf::unreduced(Polynomial::new(vec![gains.kpv, gains.kiv]), Polynomial::s())?;
    let mut dg = Diagram::new(3);
    let c = dg.add_block(&pi)?;
    let p = close_plant(&mut dg, &velocity_plant(motor)?, Port::Block(c))?;
    dg.connect(R, c, 1.0)
        .connect(Port::Block(p), c, -1.0)
        .connect(N, c, -1.0);
    run_diagram(&dg, sc, "pi")
}
