use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use cablesea::lti::log_space;
use cablesea::sea::{plant_poles, velocity_plant};
use cablesea::sim::{compare, format_float, run_2dof, run_pd, run_velocity, Scenario, SimResult, Target};
use cablesea::synthesis::{closed_loop_maps, design, second_order, Design};
use clap::ValueEnum;

use crate::artifact::ControllerFile;
use crate::config::Config;

/// Controller file name inside the output directory.
pub const CONTROLLER_FILE: &str = "controller.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ControllerChoice {
    #[value(name = "2dof")]
    TwoDof,
    Pd,
    Both,
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.6e}"))
}

fn metrics_lines(out: &mut String, r: &SimResult) {
    let m = &r.metrics;
    writeln!(
        out,
        "  {}: rise_time = {} s, overshoot = {}, settling_time = {} s, rms_tracking_error = {:.6e}, steady_state_error = {:.6e}",
        r.controller,
        opt(m.rise_time),
        opt(m.overshoot),
        opt(m.settling_time),
        m.rms_tracking_error,
        m.steady_state_error
    )
    .unwrap();
}

fn save_run(out: &mut String, dir: &Path, r: &SimResult) -> Result<()> {
    let stem = format!("{}_{}", r.scenario.name, r.controller);
    let csv = write(dir, &format!("{stem}.csv"), &r.to_csv())?;
    let json = write(dir, &format!("{stem}_metrics.json"), &r.metrics_text())?;
    writeln!(out, "  wrote {} and {}", csv.display(), json.display()).unwrap();
    Ok(())
}

/// Velocity plant, PI gains and the closed-loop step response.
pub fn tune_velocity(cfg: &Config, dir: &Path) -> Result<String> {
    let motor = &cfg.sea.motor;
    let plant = velocity_plant(motor)?;
    let (p1, p2) = plant_poles(motor)?;
    let g = cfg.tuned_gains()?;
    let mut out = String::new();
    writeln!(out, "velocity plant G_v(s) = ({}) / ({})", plant.num(), plant.den()).unwrap();
    writeln!(out, "plant poles: -{p1:.6e}, -{p2:.6e} rad/s").unwrap();
    writeln!(out, "xi = {}, omega_n = {:.6e} rad/s", g.xi, g.omega_n).unwrap();
    writeln!(out, "Kpv = {:.6e} V/(rad/s), Kiv = {:.6e} V/rad", g.kpv, g.kiv).unwrap();
    let sc = cfg
        .scenarios
        .iter()
        .find(|s| s.target == Target::Velocity)
        .cloned()
        .unwrap_or_else(|| Scenario {
            target: Target::Velocity,
            ..Scenario::step("velocity_step", 1.0, 0.1, 1e-5)
        });
    let res = run_velocity(motor, &g, &sc)?;
    writeln!(out, "step response ({}):", sc.name).unwrap();
    metrics_lines(&mut out, &res);
    save_run(&mut out, dir, &res)?;
    Ok(out)
}

fn run_design(cfg: &Config) -> Result<(cablesea::lti::RationalTf, Design)> {
    let plant = cfg.plant()?;
    let t = &cfg.torque;
    let d = design(&plant, t.omega_bar, t.xi_bar, t.q2_corner_hz)?;
    Ok((plant, d))
}

/// Optimal stabilizer, factors and 2-DOF controller; writes the controller
/// file.
pub fn synthesize(cfg: &Config, dir: &Path) -> Result<String> {
    let (plant, d) = run_design(cfg)?;
    let s = &d.stabilizer;
    let ctl = &d.controller;
    let t = &cfg.torque;
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    writeln!(out, "plant P(s) = ({}) / ({})", plant.num(), plant.den()).unwrap();
    writeln!(out, "spectral factor d(s) = {}", s.d).unwrap();
    writeln!(out, "pole placement p(s) = {}", s.p).unwrap();
    writeln!(out, "pole placement q(s) = {}", s.q).unwrap();
    writeln!(out, "J* = {}", format_float(s.j_star)).unwrap();
    writeln!(out, "a p + b q - d^2 relative residual = {:.3e}", s.residual()).unwrap();
    let bezout = ctl.factors.bezout_residual(&log_space(1e-2, 1e5, 50));
    writeln!(out, "Bezout residual |MX + NY - 1| (50 frequencies) = {bezout:.3e}").unwrap();
    writeln!(
        out,
        "Q1(s) = ({}) / ({}); proper: {}",
        ctl.q1.num(),
        ctl.q1.den(),
        yes(ctl.q1.is_proper())
    )
    .unwrap();
    writeln!(out, "Q2(s) = ({}) / ({})", ctl.q2.num(), ctl.q2.den()).unwrap();
    let target = second_order(t.omega_bar, t.xi_bar)?;
    let poles = target
        .poles()?
        .iter()
        .map(|z| format!("{:.6e}{:+.6e}j", z.re, z.im))
        .collect::<Vec<_>>()
        .join(", ");
    writeln!(
        out,
        "r->z target: omega_bar = {} rad/s, xi_bar = {}, poles {poles}",
        t.omega_bar, t.xi_bar
    )
    .unwrap();
    let maps = closed_loop_maps(ctl, &plant)?;
    writeln!(out, "closed-loop maps stable: {}", yes(maps.is_stable())).unwrap();
    let file = ControllerFile::new(&plant, *t, &d);
    let path = write(dir, CONTROLLER_FILE, &file.to_text())?;
    writeln!(out, "wrote {}", path.display()).unwrap();
    Ok(out)
}

/// Runs one scenario with the chosen controllers and writes traces,
/// metrics and, for `both`, the comparison.
pub fn simulate(cfg: &Config, scenario: &str, choice: ControllerChoice, dir: &Path) -> Result<String> {
    let sc = cfg.scenario(scenario).ok_or_else(|| {
        let names: Vec<_> = cfg.scenarios.iter().map(|s| s.name.as_str()).collect();
        anyhow!("unknown scenario `{scenario}` (available: {})", names.join(", "))
    })?;
    let mut out = String::new();
    writeln!(out, "scenario {}:", sc.name).unwrap();
    if sc.target == Target::Velocity {
        let res = run_velocity(&cfg.sea.motor, &cfg.tuned_gains()?, sc)?;
        metrics_lines(&mut out, &res);
        save_run(&mut out, dir, &res)?;
        return Ok(out);
    }
    let mut runs = Vec::new();
    if matches!(choice, ControllerChoice::TwoDof | ControllerChoice::Both) {
        let (plant, d) = run_design(cfg)?;
        runs.push(run_2dof(&plant, &d.controller, sc)?);
    }
    if matches!(choice, ControllerChoice::Pd | ControllerChoice::Both) {
        runs.push(run_pd(&cfg.plant()?, &cfg.pd, sc)?);
    }
    for r in &runs {
        metrics_lines(&mut out, r);
        save_run(&mut out, dir, r)?;
    }
    if let [a, b] = runs.as_slice() {
        let c = compare(a, b)?;
        let table = write(dir, &format!("{}_compare.txt", sc.name), &c.to_text())?;
        let errors = write(dir, &format!("{}_compare.csv", sc.name), &c.to_csv())?;
        out.push_str(&c.to_text());
        writeln!(out, "  wrote {} and {}", table.display(), errors.display()).unwrap();
    }
    Ok(out)
}
