//! Small dense helpers shared by the root finder and the state-space code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parlett-Reinsch balancing with radix-2 scale factors.
///
/// Overwrites `a` with `D^-1 A D` and returns the diagonal of `D`. Powers of
/// two keep the transformation exact in floating point.
pub fn balance(a: &mut DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut scale = vec![1.0; n];
    if n < 2 {
        return scale;
    }
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].abs();
                    row += a[(i, j)].abs();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut c = col;
            let mut g = row / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = row * 2.0;
            while c > g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + row) / f < 0.95 * total {
                converged = false;
                scale[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    scale
}

/// Eigenvalues of a real square matrix, balanced first.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut work = a.clone();
    balance(&mut work);
    let schur = |m: DMatrix<f64>| nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000);
    let found = schur(work.clone()).or_else(|| {
        // Highly structured matrices can stall the shifted QR sweep. A fixed
        // Householder similarity preserves the spectrum but breaks the
        // structure.
        let n = work.nrows();
        let v = DVector::<f64>::from_fn(n, |i, _| 1.0 + 0.37 * i as f64);
        let h = DMatrix::<f64>::identity(n, n) - (&v * v.transpose()) * (2.0 / v.norm_squared());
        schur(&h * &work * &h)
    });
    let schur = found.ok_or(Error::NoConvergence)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Spectral radius (largest eigenvalue magnitude).
pub fn spectral_radius(a: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Solves the Lyapunov equation `A' Q + Q A + W = 0` for symmetric `W`
/// through its Kronecker form. Intended for the small orders used here.
pub fn lyapunov(a: &DMatrix<f64>, w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let at = a.transpose();
    let mut k = DMatrix::<f64>::zeros(n * n, n * n);
    // Column-major vec: vec(A'Q) = (I kron A') vec(Q), vec(QA) = (A' kron I) vec(Q).
    for blk in 0..n {
        for i in 0..n {
            for j in 0..n {
                k[(blk * n + i, blk * n + j)] += at[(i, j)];
            }
        }
    }
    for bi in 0..n {
        for bj in 0..n {
            let v = at[(bi, bj)];
            if v != 0.0 {
                for i in 0..n {
                    k[(bi * n + i, bj * n + i)] += v;
                }
            }
        }
    }
    let rhs = DMatrix::from_iterator(n * n, 1, w.iter().map(|x| -x));
    let lu = k.full_piv_lu();
    let sol = lu.solve(&rhs).ok_or(Error::Unstable)?;
    let q = DMatrix::from_column_slice(n, n, sol.as_slice());
    Ok((&q + q.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balancing_preserves_spectrum() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 1e6, 0.0, 1e-6, 2.0, 1e4, 0.0, 1e-4, 3.0]);
        let mut b = a.clone();
        let d = balance(&mut b);
        let dm = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone()));
        let dinv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, d.iter().map(|x| 1.0 / x)));
        let back = &dinv * &a * &dm;
        assert!((back - &b).abs().max() < 1e-9 * b.abs().max());
        assert!(b.abs().max() < a.abs().max());
    }

    #[test]
    fn lyapunov_scalar() {
        // -2q + 1 = 0
        let a = DMatrix::from_element(1, 1, -1.0);
        let w = DMatrix::from_element(1, 1, 1.0);
        let q = lyapunov(&a, &w).unwrap();
        assert!((q[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lyapunov_residual_two_by_two() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -2.0, -3.0]);
        let w = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
        let q = lyapunov(&a, &w).unwrap();
        let res = a.transpose() * &q + &q * &a + &w;
        assert!(res.abs().max() < 1e-12);
    }
}
