use nalgebra::DMatrix;
use num_complex::Complex64;

use super::RationalTf;
use crate::error::{Error, Result};
use crate::linalg;

/// `x' = A x + B u`, `y = C x + D u`.
///
/// Realizations built from a [`RationalTf`] are single-input single-output;
/// [`super::Diagram`] produces multi-channel systems of the same type.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.nrows() != n || c.ncols() != n || d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::Dimension(format!(
                "A {}x{}, B {}x{}, C {}x{}, D {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// Controllable canonical form of a proper transfer function.
    pub fn from_tf(g: &RationalTf) -> Result<Self> {
        if !g.is_proper() {
            return Err(Error::Improper);
        }
        let den = g.den().monic();
        let num = g.num().scale(1.0 / g.den().leading());
        let n = den.degree();
        let feedthrough = if !num.is_zero() && num.degree() == n {
            num.leading()
        } else {
            0.0
        };
        let rem = &num - &den.scale(feedthrough);
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut b = DMatrix::<f64>::zeros(n, 1);
        let mut c = DMatrix::<f64>::zeros(1, n);
        if n > 0 {
            for j in 0..n {
                a[(0, j)] = -den.coeffs()[j + 1];
                c[(0, j)] = rem.coeff(n - 1 - j);
            }
            for i in 1..n {
                a[(i, i - 1)] = 1.0;
            }
            b[(0, 0)] = 1.0;
        }
        Ok(Self {
            a,
            b,
            c,
            d: DMatrix::from_element(1, 1, feedthrough),
        })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    /// Diagonal similarity that balances `A`; the transfer matrix is unchanged.
    pub fn balanced(&self) -> Self {
        let mut a = self.a.clone();
        let scale = linalg::balance(&mut a);
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        for (i, s) in scale.iter().enumerate() {
            b.row_mut(i).scale_mut(1.0 / s);
            c.column_mut(i).scale_mut(*s);
        }
        Self {
            a,
            b,
            c,
            d: self.d.clone(),
        }
    }

    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        linalg::eigenvalues(&self.a)
    }

    /// `C (j omega I - A)^-1 B + D` for output `out` and input `inp`.
    pub fn freq_response_entry(&self, omega: f64, out: usize, inp: usize) -> Result<Complex64> {
        let n = self.order();
        let d = Complex64::new(self.d[(out, inp)], 0.0);
        if n == 0 {
            return Ok(d);
        }
        let s = Complex64::new(0.0, omega);
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            let v = Complex64::new(-self.a[(i, j)], 0.0);
            if i == j {
                v + s
            } else {
                v
            }
        });
        let rhs = DMatrix::<Complex64>::from_fn(n, 1, |i, _| Complex64::new(self.b[(i, inp)], 0.0));
        let x = m.full_piv_lu().solve(&rhs).ok_or(Error::PoleOnAxis(omega))?;
        let y = (0..n).fold(Complex64::new(0.0, 0.0), |acc, i| acc + x[(i, 0)] * self.c[(out, i)]);
        Ok(y + d)
    }

    pub fn freq_response(&self, omega: f64) -> Result<Complex64> {
        self.freq_response_entry(omega, 0, 0)
    }

    /// Squared H2 norm of a strictly proper stable SISO realization.
    pub fn h2_norm_sq(&self) -> Result<f64> {
        if self.d.iter().any(|&v| v != 0.0) {
            return Err(Error::NotStrictlyProper);
        }
        if self.order() == 0 {
            return Ok(0.0);
        }
        if self.eigenvalues()?.iter().any(|z| z.re >= 0.0) {
            return Err(Error::Unstable);
        }
        let q = linalg::lyapunov(&self.a, &(self.c.transpose() * &self.c))?;
        Ok((self.b.transpose() * q * &self.b)[(0, 0)])
    }

    /// Zero-order-hold discretization. Rejects steps longer than a tenth of
    /// the fastest time constant.
    pub fn discretize(&self, dt: f64) -> Result<Discretized> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let bal = self.balanced();
        let n = bal.order();
        let m = bal.inputs();
        let rho = linalg::spectral_radius(&bal.a)?;
        if rho > 0.0 {
            let limit = 1.0 / (10.0 * rho);
            if dt > limit {
                return Err(Error::StepTooLarge { dt, limit });
            }
        }
        let mut aug = DMatrix::<f64>::zeros(n + m, n + m);
        aug.view_mut((0, 0), (n, n)).copy_from(&(&bal.a * dt));
        aug.view_mut((0, n), (n, m)).copy_from(&(&bal.b * dt));
        let e = aug.exp();
        Ok(Discretized {
            n,
            m,
            p: bal.outputs(),
            phi: row_major(&e.view((0, 0), (n, n)).into_owned()),
            gamma: row_major(&e.view((0, n), (n, m)).into_owned()),
            c: row_major(&bal.c),
            d: row_major(&bal.d),
        })
    }

    /// Simulates every input channel (one slice per input, equal lengths)
    /// from rest. Returns one trace per output.
    pub fn simulate_mimo(&self, inputs: &[&[f64]], dt: f64) -> Result<Vec<Vec<f64>>> {
        let disc = self.discretize(dt)?;
        disc.run(inputs)
    }
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Exact ZOH recursion `x[k+1] = Phi x[k] + Gamma u[k]`, `y[k] = C x[k] + D u[k]`.
#[derive(Debug, Clone)]
pub struct Discretized {
    n: usize,
    m: usize,
    p: usize,
    phi: Vec<f64>,
    gamma: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl Discretized {
    pub fn run(&self, inputs: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
        if inputs.len() != self.m {
            return Err(Error::Dimension(format!(
                "expected {} input channels, got {}",
                self.m,
                inputs.len()
            )));
        }
        let len = inputs.first().map_or(0, |u| u.len());
        if inputs.iter().any(|u| u.len() != len) {
            return Err(Error::Dimension("input channels differ in length".into()));
        }
        let (n, m, p) = (self.n, self.m, self.p);
        let mut x = vec![0.0; n];
        let mut next = vec![0.0; n];
        let mut u = vec![0.0; m];
        let mut out = vec![Vec::with_capacity(len); p];
        for k in 0..len {
            for (j, ch) in inputs.iter().enumerate() {
                u[j] = ch[k];
            }
            for (o, trace) in out.iter_mut().enumerate() {
                let cr = &self.c[o * n..(o + 1) * n];
                let dr = &self.d[o * m..(o + 1) * m];
                let y: f64 = cr.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()
                    + dr.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
                trace.push(y);
            }
            for (i, xi) in next.iter_mut().enumerate() {
                let pr = &self.phi[i * n..(i + 1) * n];
                let gr = &self.gamma[i * m..(i + 1) * m];
                *xi = pr.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()
                    + gr.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
            }
            std::mem::swap(&mut x, &mut next);
        }
        Ok(out)
    }
}

/// Response of a SISO realization to a uniformly sampled input, from rest.
pub fn simulate(g: &StateSpace, input: &[f64], dt: f64) -> Result<Vec<f64>> {
    if g.inputs() != 1 || g.outputs() != 1 {
        return Err(Error::Dimension("simulate expects a SISO system".into()));
    }
    Ok(g.simulate_mimo(&[input], dt)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::log_space;
    use proptest::prelude::*;

    fn tf(n: &[f64], d: &[f64]) -> RationalTf {
        RationalTf::from_coeffs(n, d).unwrap()
    }

    #[test]
    fn first_order_realization() {
        let ss = tf(&[1.0], &[1.0, 1.0]).to_state_space().unwrap();
        assert_eq!(ss.a(), &DMatrix::from_element(1, 1, -1.0));
        assert_eq!(ss.b(), &DMatrix::from_element(1, 1, 1.0));
        assert_eq!(ss.c(), &DMatrix::from_element(1, 1, 1.0));
        assert_eq!(ss.d()[(0, 0)], 0.0);
    }

    #[test]
    fn constant_realization() {
        let ss = RationalTf::one().to_state_space().unwrap();
        assert_eq!(ss.order(), 0);
        assert_eq!(ss.d()[(0, 0)], 1.0);
        assert_eq!(tf(&[1.0, 0.0, 0.0], &[1.0, 1.0]).to_state_space(), Err(Error::Improper));
    }

    #[test]
    fn biproper_feedthrough() {
        let g = tf(&[2.0, 3.0], &[1.0, 1.0]);
        let ss = g.to_state_space().unwrap();
        assert_eq!(ss.d()[(0, 0)], 2.0);
        for w in log_space(0.01, 100.0, 9) {
            let a = g.freq_response(w).unwrap();
            let b = ss.freq_response(w).unwrap();
            assert!((a - b).norm() < 1e-13 * a.norm());
        }
    }

    #[test]
    fn printed_plant_realization_matches() {
        let g = tf(&[0.2034, 245.1, 2.848e6, 5.761e8], &[1.0, 3340.0, 3.817e6, 6.54e8, 0.0]);
        let ss = g.to_state_space().unwrap();
        assert_eq!(ss.order(), 4);
        for w in log_space(0.1, 1e5, 20) {
            let a = g.freq_response(w).unwrap();
            let b = ss.freq_response(w).unwrap();
            let c = ss.balanced().freq_response(w).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm(), "w={w}");
            assert!((a - c).norm() < 1e-8 * a.norm(), "w={w}");
        }
    }

    #[test]
    fn step_of_first_order() {
        let ss = tf(&[1.0], &[1.0, 1.0]).to_state_space().unwrap();
        let dt = 1e-4;
        let u = vec![1.0; 10_001];
        let y = simulate(&ss, &u, dt).unwrap();
        assert!((y[10_000] - (1.0 - (-1.0f64).exp())).abs() < 1e-6);
        let zero = simulate(&ss, &vec![0.0; 100], dt).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn step_too_large() {
        let ss = tf(&[1.0], &[1.0, 1000.0]).to_state_space().unwrap();
        assert!(matches!(
            simulate(&ss, &[1.0; 4], 1e-3),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(simulate(&ss, &[1.0; 4], 1e-4).is_ok());
    }

    proptest! {
        // ZOH is exact for staircase inputs: halving dt with each value held
        // for two sub-steps must reproduce the coarse samples.
        #[test]
        fn staircase_inputs_are_exact(
            c in prop::collection::vec(-3.0f64..3.0, 8),
            w1 in 0.5f64..5.0,
            w2 in 5.0f64..20.0,
        ) {
            let g = tf(&[1.0, 2.0], &[1.0, w1 + w2, w1 * w2]);
            let ss = g.to_state_space().unwrap();
            let dt = 1e-3;
            let coarse: Vec<f64> = c.iter().flat_map(|&v| std::iter::repeat_n(v, 25)).collect();
            let fine: Vec<f64> = coarse.iter().flat_map(|&v| [v, v]).collect();
            let yc = simulate(&ss, &coarse, dt).unwrap();
            let yf = simulate(&ss, &fine, dt / 2.0).unwrap();
            for (k, v) in yc.iter().enumerate() {
                prop_assert!((v - yf[2 * k]).abs() <= 1e-10 * (1.0 + v.abs()));
            }
        }
    }
}
