use std::fmt::Write;

use super::{Signal, SimResult, Unit};
use crate::error::{Error, Result};

/// Seventeen significant digits in scientific notation; round-trips every
/// finite double.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), format_float)
}

/// `# dt=<dt>`, then `t,<name>[<unit>],...`, then one row per sample.
pub(super) fn to_csv(traces: &[Signal]) -> String {
    let dt = traces.first().map_or(0.0, |s| s.dt);
    let len = traces.first().map_or(0, Signal::len);
    let mut out = String::new();
    writeln!(out, "# dt={}", format_float(dt)).unwrap();
    out.push('t');
    for s in traces {
        write!(out, ",{}[{}]", s.name, s.unit).unwrap();
    }
    out.push('\n');
    for k in 0..len {
        out.push_str(&format_float(k as f64 * dt));
        for s in traces {
            out.push(',');
            out.push_str(&format_float(s.samples[k]));
        }
        out.push('\n');
    }
    out
}

pub(super) fn metrics_text(r: &SimResult) -> String {
    let m = &r.metrics;
    let fields = [
        ("controller", format!("\"{}\"", r.controller)),
        ("scenario", format!("\"{}\"", r.scenario.name)),
        ("dt", format_float(r.scenario.dt)),
        ("samples", r.z().len().to_string()),
        ("rise_time", format_opt(m.rise_time)),
        ("overshoot", format_opt(m.overshoot)),
        ("settling_time", format_opt(m.settling_time)),
        ("rms_tracking_error", format_float(m.rms_tracking_error)),
        ("steady_state_error", format_float(m.steady_state_error)),
    ];
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("  \"{k}\": {v}")).collect();
    format!("{{\n{}\n}}\n", body.join(",\n"))
}

/// Side-by-side metrics of two runs over the same scenario, with their
/// per-sample tracking errors `z - r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub labels: [String; 2],
    pub rows: Vec<(&'static str, Option<f64>, Option<f64>)>,
    pub dt: f64,
    pub unit: Unit,
    pub errors: [Vec<f64>; 2],
}

impl Comparison {
    /// Metric table: `metric, a, b, b - a`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "metric,{},{},delta", self.labels[0], self.labels[1]).unwrap();
        for (name, a, b) in &self.rows {
            let delta = a.zip(*b).map(|(a, b)| b - a);
            writeln!(
                out,
                "{name},{},{},{}",
                format_opt(*a),
                format_opt(*b),
                format_opt(delta)
            )
            .unwrap();
        }
        out
    }

    /// Error traces in the trace CSV layout.
    pub fn to_csv(&self) -> String {
        let len = self.errors[0].len();
        let mut out = String::new();
        writeln!(out, "# dt={}", format_float(self.dt)).unwrap();
        writeln!(
            out,
            "t,e_{0}[{u}],e_{1}[{u}],e_{1}-e_{0}[{u}]",
            self.labels[0],
            self.labels[1],
            u = self.unit.label()
        )
        .unwrap();
        for k in 0..len {
            let (a, b) = (self.errors[0][k], self.errors[1][k]);
            writeln!(
                out,
                "{},{},{},{}",
                format_float(k as f64 * self.dt),
                format_float(a),
                format_float(b),
                format_float(b - a)
            )
            .unwrap();
        }
        out
    }

    /// Value of a metric for both runs.
    pub fn metric(&self, name: &str) -> Option<(Option<f64>, Option<f64>)> {
        self.rows.iter().find(|r| r.0 == name).map(|r| (r.1, r.2))
    }
}

pub fn compare(a: &SimResult, b: &SimResult) -> Result<Comparison> {
    if a.scenario != b.scenario {
        return Err(Error::ScenarioMismatch(format!(
            "{} vs {}",
            a.scenario.name, b.scenario.name
        )));
    }
    let err = |r: &SimResult| r.z().iter().zip(r.r()).map(|(z, r)| z - r).collect::<Vec<_>>();
    let (ma, mb) = (&a.metrics, &b.metrics);
    Ok(Comparison {
        labels: [a.controller.clone(), b.controller.clone()],
        rows: vec![
            ("rise_time", ma.rise_time, mb.rise_time),
            ("overshoot", ma.overshoot, mb.overshoot),
            ("settling_time", ma.settling_time, mb.settling_time),
            (
                "rms_tracking_error",
                Some(ma.rms_tracking_error),
                Some(mb.rms_tracking_error),
            ),
            (
                "steady_state_error",
                Some(ma.steady_state_error),
                Some(mb.steady_state_error),
            ),
        ],
        dt: a.scenario.dt,
        unit: a.trace("z").map_or(Unit::Nm, |s| s.unit),
        errors: [err(a), err(b)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Metrics, Scenario, Unit};

    fn result(controller: &str, z: Vec<f64>) -> SimResult {
        let sc = Scenario::step("s", 1.0, 2e-3, 1e-3);
        let sig = |n: &str, v: Vec<f64>| Signal::new(n, Unit::Nm, 1e-3, v).unwrap();
        let traces = ["r", "d", "n", "u", "v", "y"]
            .iter()
            .map(|n| sig(n, vec![1.0; 3]))
            .chain([sig("z", z)])
            .collect();
        SimResult {
            controller: controller.into(),
            scenario: sc,
            traces,
            metrics: Metrics {
                rise_time: None,
                overshoot: Some(0.0),
                settling_time: None,
                rms_tracking_error: 0.5,
                steady_state_error: 0.25,
            },
        }
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let r = result("a", vec![0.0, 0.5, 1.0]);
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# dt=1.0000000000000000e-3");
        assert_eq!(lines[1], "t,r[Nm],d[Nm],n[Nm],u[Nm],v[Nm],y[Nm],z[Nm]");
        assert_eq!(lines.len(), 5);
        assert!(lines[3].starts_with("1.0000000000000000e-3,"));
        assert!(lines[3].ends_with(",5.0000000000000000e-1"));
    }

    #[test]
    fn metrics_block() {
        let text = result("a", vec![0.0; 3]).metrics_text();
        assert!(text.starts_with("{\n  \"controller\": \"a\",\n"));
        assert!(text.contains("\"rise_time\": null,"));
        assert!(text.contains("\"rms_tracking_error\": 5.0000000000000000e-1,"));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn identical_results_have_zero_deltas() {
        let a = result("a", vec![0.0, 0.5, 1.0]);
        let c = compare(&a, &a).unwrap();
        for (_, x, y) in &c.rows {
            assert_eq!(x, y);
        }
        assert!(c.to_csv().lines().skip(2).all(|l| l.ends_with(",0.0000000000000000e0")));
        let mut b = result("b", vec![0.0; 3]);
        b.scenario.dt = 2e-3;
        assert!(matches!(compare(&a, &b), Err(Error::ScenarioMismatch(_))));
    }
}
