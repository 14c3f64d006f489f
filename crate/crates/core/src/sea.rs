//! Physical model of the velocity-sourced cable SEA: DC motor, PI velocity
//! loop tuned by pole cancellation, and the spring torque plant.

use crate::error::{Error, Result};
use crate::lti::RationalTf;
use crate::polynomial::Polynomial;

/// Relative pole separation below which the cancellation design degenerates.
const REPEATED_TOL: f64 = 1e-6;

/// Brushed DC motor. Coulomb friction and load torque are taken as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorParams {
    /// Rotor inertia, kg m^2.
    pub j: f64,
    /// Coil inductance, H.
    pub la: f64,
    /// Winding resistance, Ohm.
    pub ra: f64,
    /// Torque constant, Nm/A.
    pub kt: f64,
    /// Back-emf constant, Vs/rad.
    pub kb: f64,
    /// Viscous friction, Nm/(rad/s).
    pub kf: f64,
}

impl MotorParams {
    pub fn nominal() -> Self {
        Self {
            j: 6.96e-6,
            la: 0.62e-3,
            ra: 2.07,
            kt: 0.0525,
            kb: 0.0525,
            kf: 1e-5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("J", self.j), ("La", self.la), ("Ra", self.ra), ("Kt", self.kt)];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("Kb", self.kb), ("Kf", self.kf)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// `Kt / (J La)`.
    pub fn gain(&self) -> f64 {
        self.kt / (self.j * self.la)
    }

    /// Monic velocity-plant denominator `s^2 + c1 s + c0`.
    pub fn denominator(&self) -> Polynomial {
        let jl = self.j * self.la;
        Polynomial::new(vec![
            1.0,
            (self.j * self.ra + self.kf * self.la) / jl,
            (self.kf * self.ra + self.kb * self.kt) / jl,
        ])
    }
}

/// Motor plus spring, gearbox and load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeaParams {
    pub motor: MotorParams,
    /// Spring stiffness, Nm/rad.
    pub ks: f64,
    /// Gearbox ratio, input:output.
    pub kg: f64,
    /// Spring damping, Nm/(rad/s).
    pub cs: f64,
    /// Spring inertia, kg m^2.
    pub ms: f64,
    /// Load inertia, kg m^2. Unused: the load side is held fixed.
    pub jl: f64,
}

impl SeaParams {
    pub fn nominal() -> Self {
        Self {
            motor: MotorParams::nominal(),
            ks: 138.0,
            kg: 156.0,
            cs: 0.01,
            ms: 1e-5,
            jl: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.motor.validate()?;
        for (name, v) in [("Ks", self.ks), ("Kg", self.kg)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("Cs", self.cs), ("Ms", self.ms), ("Jl", self.jl)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// PI velocity-loop gains and the design quantities behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiGains {
    /// Proportional gain, V/(rad/s).
    pub kpv: f64,
    /// Integral gain, V/rad.
    pub kiv: f64,
    /// Closed-loop natural frequency, rad/s.
    pub omega_n: f64,
    pub xi: f64,
    /// Cancelled (slow) plant pole, rad/s.
    pub p1: f64,
    /// Remaining (fast) plant pole, rad/s.
    pub p2: f64,
}

impl PiGains {
    /// Gains fixed externally (for instance rounded values). The design
    /// quantities are recomputed so that they describe these gains:
    /// `p1 = Kiv / Kpv`, `omega_n^2 = Kpv Kt / (J La)`, `p2 = 2 xi omega_n`.
    pub fn from_gains(m: &MotorParams, kpv: f64, kiv: f64, xi: f64) -> Result<Self> {
        m.validate()?;
        if !(kpv > 0.0) || !(kiv > 0.0) || !(xi > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gains and damping must be positive, got Kpv={kpv}, Kiv={kiv}, xi={xi}"
            )));
        }
        let omega_n = (kpv * m.gain()).sqrt();
        Ok(Self {
            kpv,
            kiv,
            omega_n,
            xi,
            p1: kiv / kpv,
            p2: 2.0 * xi * omega_n,
        })
    }
}

/// `omega(s) / v_a(s)` of the motor.
pub fn velocity_plant(m: &MotorParams) -> Result<RationalTf> {
    m.validate()?;
    let den = m.denominator();
    let c = den.coeffs();
    if c[1] * c[1] - 4.0 * c[2] < 0.0 {
        return Err(Error::OverdampedRequired);
    }
    RationalTf::unreduced(Polynomial::constant(m.gain()), den)
}

/// Real plant poles as positive magnitudes, `(p1, p2)` with `p1 <= p2`.
pub fn plant_poles(m: &MotorParams) -> Result<(f64, f64)> {
    m.validate()?;
    let c = m.denominator().coeffs().to_vec();
    let disc = c[1] * c[1] - 4.0 * c[2];
    if disc < 0.0 {
        return Err(Error::ComplexPoles);
    }
    // Stable evaluation of both roots of s^2 + c1 s + c0.
    let big = 0.5 * (c[1] + disc.sqrt());
    let small = if big == 0.0 { 0.0 } else { c[2] / big };
    Ok((small, big))
}

/// PI tuning by cancelling the slow plant pole: `Kiv / Kpv = p1`,
/// `2 xi omega_n = p2`, `Kpv = omega_n^2 J La / Kt`.
pub fn tune_pi(m: &MotorParams, xi: f64) -> Result<PiGains> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::InvalidParameter(format!("damping must lie in (0, 1), got {xi}")));
    }
    let (p1, p2) = plant_poles(m)?;
    if !(p1 > 0.0) {
        return Err(Error::InvalidParameter("velocity plant must be strictly stable".into()));
    }
    if p2 - p1 <= REPEATED_TOL * p2 {
        return Err(Error::RepeatedPoles);
    }
    let omega_n = p2 / (2.0 * xi);
    let kpv = omega_n * omega_n / m.gain();
    Ok(PiGains {
        kpv,
        kiv: p1 * kpv,
        omega_n,
        xi,
        p1,
        p2,
    })
}

/// Unity-feedback PI velocity loop. With `exact_cancellation` the ideal
/// second-order form is returned; otherwise the full third-order loop with no
/// symbolic cancellation.
pub fn velocity_closed_loop(m: &MotorParams, g: &PiGains, exact_cancellation: bool) -> Result<RationalTf> {
    let w2 = g.omega_n * g.omega_n;
    if exact_cancellation {
        return RationalTf::unreduced(
            Polynomial::constant(w2),
            Polynomial::new(vec![1.0, 2.0 * g.xi * g.omega_n, w2]),
        );
    }
    let plant = velocity_plant(m)?;
    let k = m.gain();
    let pi = Polynomial::new(vec![g.kpv, g.kiv]);
    let num = pi.scale(k);
    let den = &(plant.den() * &Polynomial::s()) + &num;
    RationalTf::unreduced(num, den)
}

/// Spring torque per motor velocity with the load held fixed:
/// `(Ms s^2 + Cs s + Ks) / (Kg s)`. Improper; used only in series with a
/// strictly proper velocity loop.
pub fn spring_torque_tf(p: &SeaParams) -> Result<RationalTf> {
    p.validate()?;
    RationalTf::unreduced(
        Polynomial::new(vec![p.ms, p.cs, p.ks]),
        Polynomial::new(vec![p.kg, 0.0]),
    )
}

/// Torque plant `P(s) = T_o(s) / omega_d(s)`: third-order velocity loop in
/// series with the spring, with a monic denominator and no cancellation.
pub fn torque_plant(p: &SeaParams, g: &PiGains) -> Result<RationalTf> {
    let vel = velocity_closed_loop(&p.motor, g, false)?;
    Ok(vel.series_unreduced(&spring_torque_tf(p)?).normalized())
}
