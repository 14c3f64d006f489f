//! Real univariate polynomials in the Laplace variable.
//!
//! Coefficients are stored highest degree first, the way transfer functions
//! are usually written down: `[1.0, 3.0, 2.0]` is `s^2 + 3s + 2`.

mod diophantine;
mod roots;
mod spectral;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use diophantine::solve_diophantine;
pub use roots::{coprime, polish_roots};
pub use spectral::spectral_factor;

/// Default absolute tolerance on scaled coefficients.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative root distance under which two roots are treated as common.
pub const COPRIME_TOL: f64 = 1e-6;

#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients, highest degree first.
    /// Leading coefficients that are exactly zero are dropped.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        let lead = coeffs.iter().position(|&c| c != 0.0);
        match lead {
            Some(0) => {}
            Some(k) => {
                coeffs.drain(..k);
            }
            None => coeffs = vec![0.0],
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        Self::new(vec![1.0, 0.0])
    }

    /// `lead * prod (s - r)`. Complex roots must appear in conjugate pairs;
    /// each pair is multiplied in as a real quadratic.
    pub fn from_roots(lead: f64, roots: &[Complex64]) -> Self {
        let mut out = Self::constant(lead);
        for r in roots {
            if r.im.abs() <= 1e-14 * r.norm() {
                out = &out * &Self::new(vec![1.0, -r.re]);
            } else if r.im > 0.0 {
                out = &out * &Self::new(vec![1.0, -2.0 * r.re, r.norm_sqr()]);
            }
        }
        out
    }

    /// Coefficients, highest degree first.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient multiplying `s^power`.
    pub fn coeff(&self, power: usize) -> f64 {
        let n = self.degree();
        if power > n {
            0.0
        } else {
            self.coeffs[n - power]
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[..n]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (n - i) as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// `p(-s)`: the coefficient of `s^k` picks up a factor `(-1)^k`.
    pub fn reflect(&self) -> Self {
        let n = self.degree();
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if (n - i) % 2 == 1 { -c } else { c })
                .collect::<Vec<_>>(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    /// `p(sigma * s)`.
    pub fn scale_variable(&self, sigma: f64) -> Self {
        let n = self.degree();
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * sigma.powi((n - i) as i32))
                .collect::<Vec<_>>(),
        )
    }

    /// Same polynomial divided by its leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(1.0 / self.leading())
    }

    /// Number of roots at the origin (trailing zero coefficients).
    pub fn zero_roots(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count()
    }

    /// Geometric mean magnitude of the nonzero roots, estimated from the
    /// outermost nonzero coefficients. Used to frequency-scale before solving.
    pub fn root_scale(&self) -> f64 {
        let z = self.zero_roots();
        let n = self.degree();
        if self.is_zero() || n == z {
            return 1.0;
        }
        let last = self.coeffs[n - z];
        let scale = (last / self.leading()).abs().powf(1.0 / (n - z) as f64);
        if scale.is_finite() && scale > 0.0 {
            scale
        } else {
            1.0
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let n = self.degree();
        let m = divisor.degree();
        if self.is_zero() || n < m {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; n - m + 1];
        for i in 0..=(n - m) {
            let f = rem[i] / divisor.coeffs[0];
            quot[i] = f;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= f * d;
            }
        }
        let r = if m == 0 {
            Self::zero()
        } else {
            Self::new(rem[n - m + 1..].to_vec())
        };
        (Self::new(quot), r)
    }

    /// All complex roots with multiplicity.
    ///
    /// Companion-matrix eigenvalues after frequency scaling and balancing,
    /// followed by a guarded Newton polish on the original coefficients.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        roots::roots(self)
    }

    /// True iff every root has real part below `-tol`.
    pub fn is_hurwitz(&self, tol: f64) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == 0 {
            return true;
        }
        match self.roots() {
            Ok(r) => r.iter().all(|z| z.re < -tol),
            Err(_) => false,
        }
    }

    /// Coefficientwise error relative to the largest coefficient of `other`.
    pub fn relative_distance(&self, other: &Polynomial) -> f64 {
        let diff = self - other;
        let scale = other.max_abs_coeff().max(self.max_abs_coeff());
        if scale == 0.0 {
            0.0
        } else {
            diff.max_abs_coeff() / scale
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({:?})", self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let power = n - i;
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_mag = power == 0 || mag != 1.0;
            if show_mag {
                write!(f, "{mag:.6e}")?;
            }
            match power {
                0 => {}
                1 => write!(f, "{}s", if show_mag { "*" } else { "" })?,
                _ => write!(f, "{}s^{power}", if show_mag { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

fn add_coeffs(lhs: &[f64], rhs: &[f64], sign: f64) -> Polynomial {
    let n = lhs.len().max(rhs.len());
    let mut out = vec![0.0; n];
    for (i, c) in lhs.iter().enumerate() {
        out[n - lhs.len() + i] += c;
    }
    for (i, c) in rhs.iter().enumerate() {
        out[n - rhs.len() + i] += sign * c;
    }
    Polynomial::new(out)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        add_coeffs(&self.coeffs, &rhs.coeffs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        add_coeffs(&self.coeffs, &rhs.coeffs, -1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Checks degree preconditions shared by the spectral and Diophantine solvers.
pub(crate) fn check_plant_pair(a: &Polynomial, b: &Polynomial) -> Result<usize> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = a.degree();
    if !b.is_zero() && b.degree() >= n {
        return Err(Error::DegreeMismatch {
            expected: n.saturating_sub(1),
            found: b.degree(),
        });
    }
    Ok(n)
}
