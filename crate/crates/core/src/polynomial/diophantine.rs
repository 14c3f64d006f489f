use nalgebra::{DMatrix, DVector};

use super::{check_plant_pair, Polynomial};
use crate::error::{Error, Result};

/// Reciprocal condition number below which the Sylvester matrix is singular.
const RCOND_MIN: f64 = 1e-13;

/// Solves `a p + b q = target` for `deg p = n`, `deg q <= n - 1`, where
/// `n = deg a` and `deg target = 2n`.
///
/// The `(2n+1) x (2n+1)` Sylvester system is formed in the frequency-scaled
/// variable `w = s / sigma` with column equilibration, solved by full-pivot
/// LU and given one step of iterative refinement.
pub fn solve_diophantine(a: &Polynomial, b: &Polynomial, target: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    let n = check_plant_pair(a, b)?;
    if target.degree() != 2 * n || target.is_zero() {
        return Err(Error::DegreeMismatch {
            expected: 2 * n,
            found: target.degree(),
        });
    }
    if n == 0 {
        return Ok((target.scale(1.0 / a.leading()), Polynomial::zero()));
    }

    let sigma = target.root_scale();
    let a_s = a.scale_variable(sigma);
    let b_s = b.scale_variable(sigma);
    let t_s = target.scale_variable(sigma);
    let alpha = a_s.max_abs_coeff();
    let beta = b_s.max_abs_coeff().max(f64::MIN_POSITIVE);
    let tau = t_s.max_abs_coeff();
    let a_n = a_s.scale(1.0 / alpha);
    let b_n = b_s.scale(1.0 / beta);
    let t_n = t_s.scale(1.0 / tau);

    let size = 2 * n + 1;
    let mut sylvester = DMatrix::<f64>::zeros(size, size);
    // Column j < n+1 holds a shifted by j (unknown p_j, power n - j); column
    // n+1+j holds b (padded to n+1 coefficients) shifted by j+1 (unknown q_j,
    // power n - 1 - j).
    let a_c = a_n.coeffs();
    for j in 0..=n {
        for (i, &c) in a_c.iter().enumerate() {
            sylvester[(j + i, j)] = c;
        }
    }
    let mut b_pad = vec![0.0; n + 1];
    let bc = b_n.coeffs();
    if !b_n.is_zero() {
        b_pad[n + 1 - bc.len()..].copy_from_slice(bc);
    }
    for j in 0..n {
        for (i, &c) in b_pad.iter().enumerate() {
            sylvester[(j + 1 + i, n + 1 + j)] = c;
        }
    }
    let rhs = DVector::from_vec(t_n.coeffs().to_vec());

    let sv = sylvester.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smax == 0.0 || smin / smax < RCOND_MIN {
        return Err(Error::SingularSylvester);
    }
    let lu = sylvester.clone().full_piv_lu();
    let mut x = lu.solve(&rhs).ok_or(Error::SingularSylvester)?;
    let r = &rhs - &sylvester * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }

    // Undo equilibration and frequency scaling.
    let p_w = Polynomial::new(x.rows(0, n + 1).iter().map(|v| v * tau / alpha).collect::<Vec<_>>());
    let q_w = Polynomial::new(x.rows(n + 1, n).iter().map(|v| v * tau / beta).collect::<Vec<_>>());
    let p = p_w.scale_variable(1.0 / sigma);
    let q = q_w.scale_variable(1.0 / sigma);
    // deg(b q) < 2n pins the leading coefficient of p exactly.
    let mut pc = p.coeffs().to_vec();
    if pc.len() == n + 1 {
        pc[0] = target.leading() / a.leading();
    }
    Ok((Polynomial::new(pc), q))
}
