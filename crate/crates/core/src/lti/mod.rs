//! Rational transfer functions and their state-space machinery.

mod diagram;
mod metrics;
mod state_space;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomial::{Polynomial, DEFAULT_TOL};

pub use diagram::{Diagram, Port};
pub use metrics::{step_metrics, StepMetrics};
pub use state_space::{simulate, Discretized, StateSpace};

/// Relative root distance under which a pole and a zero cancel.
pub const CANCEL_TOL: f64 = 1e-6;

/// `num(s) / den(s)`.
///
/// [`RationalTf::new`] and the composition methods return the reduced normal
/// form: pole/zero pairs closer than [`CANCEL_TOL`] (relative) are cancelled
/// and the denominator has a positive leading coefficient.
/// [`RationalTf::unreduced`] skips the cancellation, for factor sets that
/// deliberately share a denominator.
#[derive(Clone, PartialEq)]
pub struct RationalTf {
    num: Polynomial,
    den: Polynomial,
}

impl RationalTf {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        Ok(Self::unreduced(num, den)?.reduced())
    }

    /// Sign-normalized but otherwise untouched.
    pub fn unreduced(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (num, den) = if den.leading() < 0.0 { (-num, -den) } else { (num, den) };
        Ok(Self { num, den })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn constant(k: f64) -> Self {
        Self {
            num: Polynomial::constant(k),
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Reduced normal form with the default cancellation tolerance.
    pub fn reduced(&self) -> Self {
        self.reduced_with(CANCEL_TOL)
    }

    /// Cancels pole/zero pairs within `tol` relative distance, nearest pairs
    /// first. When anything cancels, both polynomials are rebuilt from their
    /// remaining roots.
    pub fn reduced_with(&self, tol: f64) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        if self.num.degree() == 0 || self.den.degree() == 0 {
            return self.clone();
        }
        let (Ok(zeros), Ok(poles)) = (self.num.roots(), self.den.roots()) else {
            return self.clone();
        };
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (i, z) in zeros.iter().enumerate() {
            if z.im < 0.0 {
                continue;
            }
            for (j, p) in poles.iter().enumerate() {
                if p.im < 0.0 || (z.im == 0.0) != (p.im == 0.0) {
                    continue;
                }
                let scale = z.norm().max(p.norm());
                let dist = (z - p).norm();
                if dist <= tol * scale {
                    pairs.push((if scale == 0.0 { 0.0 } else { dist / scale }, i, j));
                }
            }
        }
        if pairs.is_empty() {
            return self.clone();
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut used_z = vec![false; zeros.len()];
        let mut used_p = vec![false; poles.len()];
        for (_, i, j) in pairs {
            if used_z[i] || used_p[j] {
                continue;
            }
            used_z[i] = true;
            used_p[j] = true;
            if zeros[i].im > 0.0 {
                if let Some(k) = find_conj(&zeros, &used_z, zeros[i]) {
                    used_z[k] = true;
                }
                if let Some(k) = find_conj(&poles, &used_p, poles[j]) {
                    used_p[k] = true;
                }
            }
        }
        let keep = |roots: &[Complex64], used: &[bool]| -> Vec<Complex64> {
            roots.iter().zip(used).filter(|(_, &u)| !u).map(|(r, _)| *r).collect()
        };
        let num = Polynomial::from_roots(self.num.leading(), &keep(&zeros, &used_z));
        let den = Polynomial::from_roots(self.den.leading(), &keep(&poles, &used_p));
        Self { num, den }
    }

    /// Same transfer function with a monic denominator.
    pub fn normalized(&self) -> Self {
        let k = 1.0 / self.den.leading();
        Self {
            num: self.num.scale(k),
            den: self.den.scale(k),
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval_complex(s) / self.den.eval_complex(s)
    }

    /// `g(j omega)`.
    pub fn freq_response(&self, omega: f64) -> Result<Complex64> {
        let s = Complex64::new(0.0, omega);
        let den = self.den.eval_complex(s);
        let scale = self.den.coeffs().iter().fold(0.0, |acc, c| acc * omega.abs() + c.abs());
        if den.norm() <= 1e-12 * scale {
            return Err(Error::PoleOnAxis(omega));
        }
        Ok(self.num.eval_complex(s) / den)
    }

    pub fn dc_gain(&self) -> Result<f64> {
        Ok(self.freq_response(0.0)?.re)
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() <= self.den.degree()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    /// True iff the denominator is Hurwitz within `tol`.
    pub fn is_stable(&self, tol: f64) -> bool {
        self.den.is_hurwitz(tol)
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        self.den.roots()
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if self.num.is_zero() || self.num.degree() == 0 {
            return Ok(Vec::new());
        }
        self.num.roots()
    }

    /// Product `self * other`, reduced.
    pub fn series(&self, other: &RationalTf) -> RationalTf {
        self.series_unreduced(other).reduced()
    }

    pub fn series_unreduced(&self, other: &RationalTf) -> RationalTf {
        Self {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn parallel(&self, other: &RationalTf) -> RationalTf {
        self.add_unreduced(other).reduced()
    }

    /// Sum over the common denominator. Identical denominators are not
    /// multiplied together.
    pub fn add_unreduced(&self, other: &RationalTf) -> RationalTf {
        if self.den == other.den {
            return Self {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        Self {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn sub_unreduced(&self, other: &RationalTf) -> RationalTf {
        self.add_unreduced(&other.neg())
    }

    pub fn neg(&self) -> RationalTf {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: f64) -> RationalTf {
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// `1 / self`.
    pub fn inverse(&self) -> Result<RationalTf> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::unreduced(self.den.clone(), self.num.clone())
    }

    /// `self / other`, unreduced.
    pub fn div_unreduced(&self, other: &RationalTf) -> Result<RationalTf> {
        Ok(self.series_unreduced(&other.inverse()?))
    }

    /// Negative feedback `self / (1 + self * h)`, reduced.
    pub fn feedback(&self, h: &RationalTf) -> Result<RationalTf> {
        Ok(self.feedback_unreduced(h)?.reduced())
    }

    pub fn feedback_unreduced(&self, h: &RationalTf) -> Result<RationalTf> {
        let num = &self.num * &h.den;
        let den = &(&self.den * &h.den) + &(&self.num * &h.num);
        if den.is_zero() {
            return Err(Error::AlgebraicLoop);
        }
        Self::unreduced(num, den)
    }

    /// Squared H2 norm from the observability Gramian of a balanced
    /// realization: `B' Q B` with `A' Q + Q A + C' C = 0`.
    pub fn h2_norm_sq(&self) -> Result<f64> {
        if !self.is_strictly_proper() {
            return Err(Error::NotStrictlyProper);
        }
        if self.num.is_zero() {
            return Ok(0.0);
        }
        if !self.is_stable(0.0) {
            return Err(Error::Unstable);
        }
        self.to_state_space()?.balanced().h2_norm_sq()
    }

    /// Controllable canonical realization.
    pub fn to_state_space(&self) -> Result<StateSpace> {
        StateSpace::from_tf(self)
    }

    /// Relative degree, `deg den - deg num`; negative when improper.
    pub fn relative_degree(&self) -> isize {
        if self.num.is_zero() {
            return isize::MAX;
        }
        self.den.degree() as isize - self.num.degree() as isize
    }
}

fn find_conj(roots: &[Complex64], used: &[bool], r: Complex64) -> Option<usize> {
    roots
        .iter()
        .enumerate()
        .filter(|(k, z)| !used[*k] && z.im < 0.0)
        .min_by(|(_, a), (_, b)| (*a - r.conj()).norm().total_cmp(&(*b - r.conj()).norm()))
        .map(|(k, _)| k)
}

impl fmt::Debug for RationalTf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalTf({:?} / {:?})", self.num.coeffs(), self.den.coeffs())
    }
}

impl fmt::Display for RationalTf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Free-function form of [`RationalTf::series`].
pub fn series(g1: &RationalTf, g2: &RationalTf) -> RationalTf {
    g1.series(g2)
}

/// Free-function form of [`RationalTf::feedback`].
pub fn feedback(g: &RationalTf, h: &RationalTf) -> Result<RationalTf> {
    g.feedback(h)
}

/// Stability with the crate's default tolerance.
pub fn is_stable(g: &RationalTf) -> bool {
    g.is_stable(DEFAULT_TOL)
}

/// Maximum relative frequency-response mismatch between two transfer
/// functions over the given frequencies.
pub fn max_response_error(g: &RationalTf, h: &RationalTf, omegas: &[f64]) -> f64 {
    omegas
        .iter()
        .map(|&w| {
            let s = Complex64::new(0.0, w);
            let a = g.eval(s);
            let b = h.eval(s);
            (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

/// `count` logarithmically spaced frequencies between `lo` and `hi` (rad/s).
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (l, h) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| 10f64.powf(l + (h - l) * i as f64 / (count - 1) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(n: &[f64], d: &[f64]) -> RationalTf {
        RationalTf::from_coeffs(n, d).unwrap()
    }

    fn same(g: &RationalTf, h: &RationalTf) -> bool {
        let (g, h) = (g.normalized(), h.normalized());
        g.num.relative_distance(&h.num) < 1e-12 && g.den.relative_distance(&h.den) < 1e-12
    }

    #[test]
    fn series_examples() {
        let g = tf(&[1.0], &[1.0, 0.0]).series(&tf(&[1.0], &[1.0, 1.0]));
        assert!(same(&g, &tf(&[1.0], &[1.0, 1.0, 0.0])));
        let h = tf(&[2.0, 1.0], &[1.0, 3.0, 5.0]);
        assert!(same(&h.series(&RationalTf::one()), &h));
        let c = tf(&[1.0, 1.0], &[1.0, 2.0]).series(&tf(&[1.0, 2.0], &[1.0, 3.0]));
        assert!(same(&c, &tf(&[1.0, 1.0], &[1.0, 3.0])));
        assert_eq!(c.den().degree(), 1);
    }

    #[test]
    fn feedback_examples() {
        let g = tf(&[1.0], &[1.0, 0.0]).feedback(&RationalTf::one()).unwrap();
        assert!(same(&g, &tf(&[1.0], &[1.0, 1.0])));
        let z = RationalTf::zero().feedback(&tf(&[3.0], &[1.0, 2.0])).unwrap();
        assert!(z.is_zero());
        let err = RationalTf::one().feedback(&RationalTf::constant(-1.0));
        assert_eq!(err, Err(Error::AlgebraicLoop));
    }

    #[test]
    fn stability_examples() {
        assert!(is_stable(&tf(&[1.0], &[1.0, 1.0])));
        assert!(!is_stable(&tf(&[1.0], &[1.0, -1.0])));
        let plant = tf(&[0.2034, 245.1, 2.848e6, 5.761e8], &[1.0, 3340.0, 3.817e6, 6.54e8, 0.0]);
        assert!(!is_stable(&plant));
    }

    #[test]
    fn freq_response_examples() {
        let g = tf(&[1.0], &[1.0, 1.0]);
        assert_eq!(g.freq_response(0.0).unwrap(), Complex64::new(1.0, 0.0));
        let v = g.freq_response(1.0).unwrap();
        assert!((v - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        assert!(matches!(
            tf(&[1.0], &[1.0, 0.0]).freq_response(0.0),
            Err(Error::PoleOnAxis(_))
        ));
        let wn: f64 = 1781.17;
        let h = tf(&[wn * wn], &[1.0, 2.0 * 0.88 * wn, wn * wn]);
        assert!((h.freq_response(0.0).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn reduction_keeps_distinct_nearby_roots() {
        // Roots 1e-4 apart relative: must survive.
        let g = tf(&[1.0, 205.77], &[1.0, 205.75]);
        assert_eq!(g.den().degree(), 1);
        // Conjugate pairs cancel together.
        let h = tf(&[1.0, 2.0, 5.0], &[1.0, 3.0, 7.0, 5.0]);
        assert_eq!(h.den().degree(), 1);
        assert!((h.den().coeffs()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h2_examples() {
        assert!((tf(&[1.0], &[1.0, 1.0]).h2_norm_sq().unwrap() - 0.5).abs() < 1e-14);
        let r2 = 2f64.sqrt();
        let v = tf(&[1.0], &[1.0, r2]).h2_norm_sq().unwrap();
        assert!((v - 1.0 / (2.0 * r2)).abs() < 1e-14);
        assert_eq!(tf(&[1.0, 0.0], &[1.0, 1.0]).h2_norm_sq(), Err(Error::NotStrictlyProper));
        assert_eq!(tf(&[1.0], &[1.0, -1.0]).h2_norm_sq(), Err(Error::Unstable));
    }
}
