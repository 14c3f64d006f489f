use crate::error::{Error, Result};

/// Step-response figures of a uniformly sampled trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMetrics {
    /// 10% to 90% crossing interval, s.
    pub rise_time: f64,
    /// `(peak - target) / target`, clamped at zero.
    pub overshoot: f64,
    /// Time after which the trace stays inside the 2% band, s.
    pub settling_time: f64,
}

/// Rise time, overshoot and 2% settling time of `trace` sampled every `dt`
/// towards `target`. Crossing times are linearly interpolated.
pub fn step_metrics(trace: &[f64], dt: f64, target: f64) -> Result<StepMetrics> {
    if trace.is_empty() || target == 0.0 || !(dt > 0.0) {
        return Err(Error::InvalidParameter(
            "step metrics need a non-empty trace, non-zero target and positive dt".into(),
        ));
    }
    // Work on the normalized response so negative steps behave alike.
    let y: Vec<f64> = trace.iter().map(|v| v / target).collect();
    let crossing = |level: f64| -> Option<f64> {
        if y[0] >= level {
            return Some(0.0);
        }
        y.windows(2)
            .enumerate()
            .find_map(|(k, w)| (w[1] >= level).then(|| (k as f64 + (level - w[0]) / (w[1] - w[0])) * dt))
    };
    let (Some(t10), Some(t90)) = (crossing(0.1), crossing(0.9)) else {
        return Err(Error::NotSettled);
    };
    let peak = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let band = 0.02;
    let outside = |v: f64| (v - 1.0).abs() > band;
    let tail = (y.len() as f64 * 0.95) as usize;
    if y[tail.min(y.len() - 1)..].iter().any(|&v| outside(v)) {
        return Err(Error::NotSettled);
    }
    let settling_time = match y.iter().rposition(|&v| outside(v)) {
        Some(k) => (k + 1) as f64 * dt,
        None => 0.0,
    };
    Ok(StepMetrics {
        rise_time: t90 - t10,
        overshoot: (peak - 1.0).max(0.0),
        settling_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_step() {
        let m = step_metrics(&[1.0; 50], 1e-3, 1.0).unwrap();
        assert_eq!(m.rise_time, 0.0);
        assert_eq!(m.overshoot, 0.0);
        assert_eq!(m.settling_time, 0.0);
    }

    #[test]
    fn first_order_rise_time() {
        let dt = 1e-3;
        let y: Vec<f64> = (0..=10_000).map(|k| 1.0 - (-(k as f64) * dt).exp()).collect();
        let m = step_metrics(&y, dt, 1.0).unwrap();
        assert!((m.rise_time - 9f64.ln()).abs() < 1e-6, "{}", m.rise_time);
        assert_eq!(m.overshoot, 0.0);
        // Leaves the 2% band at t = ln 50.
        assert!((m.settling_time - 50f64.ln()).abs() < 2e-3);
    }

    #[test]
    fn negative_target_and_overshoot() {
        let y = [0.0, -0.5, -1.1, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0];
        let m = step_metrics(&y, 1.0, -1.0).unwrap();
        assert!((m.overshoot - 0.1).abs() < 1e-12);
        assert_eq!(m.settling_time, 3.0);
    }

    #[test]
    fn not_settled() {
        let y: Vec<f64> = (0..100).map(|k| if k % 2 == 0 { 1.0 } else { 1.5 }).collect();
        assert_eq!(step_metrics(&y, 1.0, 1.0), Err(Error::NotSettled));
    }
}
