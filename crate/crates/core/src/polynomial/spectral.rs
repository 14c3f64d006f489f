use num_complex::Complex64;

use super::{check_plant_pair, coprime, Polynomial, COPRIME_TOL};
use crate::error::{Error, Result};

/// Stable spectral factor `d` of `a(-s)a(s) + b(-s)b(s)`.
///
/// The even polynomial is factored through its roots, which come in
/// `(r, -r)` pairs; `d` collects the left half-plane ones. Its leading
/// coefficient is `|a_0|`, so `d - a` is strictly proper whenever `a_0 > 0`.
pub fn spectral_factor(a: &Polynomial, b: &Polynomial, tol: f64) -> Result<Polynomial> {
    let n = check_plant_pair(a, b)?;
    if !coprime(a, b, COPRIME_TOL)? {
        return Err(Error::NotCoprime);
    }
    let lead = a.leading().abs();
    if n == 0 {
        return Ok(Polynomial::constant(lead));
    }
    let even = &(&a.reflect() * a) + &(&b.reflect() * b);
    // even(s) = f(s^2); the odd coefficients vanish identically.
    let f = Polynomial::new((0..=n).rev().map(|k| even.coeff(2 * k)).collect::<Vec<_>>());
    let mut stable = Vec::with_capacity(n);
    for u in f.roots()? {
        // Principal square root has Re >= 0; its negation is the stable root.
        let r = -u.sqrt();
        if r.re.abs() <= tol * r.norm() || r.norm() == 0.0 {
            return Err(Error::ImaginaryAxisRoot);
        }
        stable.push(r);
    }
    let stable = conjugate_closed(stable);
    let d = Polynomial::from_roots(lead, &stable);
    Ok(refine(&d, &even))
}

/// Square roots of a conjugate pair are themselves a conjugate pair, but
/// rounding can leave the imaginary parts slightly asymmetric; force exact
/// symmetry so the rebuilt polynomial is real.
fn conjugate_closed(roots: Vec<Complex64>) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(roots.len());
    let mut upper: Vec<Complex64> = roots.iter().copied().filter(|r| r.im > 0.0).collect();
    let lower: Vec<Complex64> = roots.iter().copied().filter(|r| r.im < 0.0).collect();
    for r in roots.iter().filter(|r| r.im == 0.0) {
        out.push(*r);
    }
    if upper.len() != lower.len() {
        // Unpaired near-real roots: treat the smallest imaginary parts as real.
        let mut all: Vec<Complex64> = roots.iter().copied().filter(|r| r.im != 0.0).collect();
        all.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
        let extra = all.len() - 2 * upper.len().min(lower.len());
        for r in all.iter().take(extra) {
            out.push(Complex64::new(r.re, 0.0));
        }
        upper = all[extra..].iter().copied().filter(|r| r.im > 0.0).collect();
    }
    for r in upper {
        out.push(r);
        out.push(r.conj());
    }
    out
}

/// Newton steps on `d(-s)d(s) = e` with the leading coefficient of `d` held
/// fixed. Each step solves the linear Sylvester-type system for the
/// correction; steps that do not shrink the residual are discarded.
fn refine(d: &Polynomial, even: &Polynomial) -> Polynomial {
    let n = d.degree();
    let residual = |d: &Polynomial| (even - &(&d.reflect() * d)).max_abs_coeff();
    let mut best = d.clone();
    let mut best_res = residual(d);
    for _ in 0..3 {
        if best_res == 0.0 {
            break;
        }
        // Unknowns: corrections to coefficients of s^0..s^{n-1}.
        // Equations: even powers s^0, s^2, ..., s^{2n-2}.
        let target = even - &(&best.reflect() * &best);
        let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
        let mut rhs = nalgebra::DVector::<f64>::zeros(n);
        for row in 0..n {
            let power = 2 * row;
            rhs[row] = target.coeff(power);
            for k in 0..n {
                // d(-s) * s^k + (-s)^k * d(s), coefficient of s^power.
                if power >= k {
                    let j = power - k;
                    let dj = best.coeff(j);
                    let sign_j = if j % 2 == 1 { -1.0 } else { 1.0 };
                    let sign_k = if k % 2 == 1 { -1.0 } else { 1.0 };
                    m[(row, k)] += dj * (sign_j + sign_k);
                }
            }
        }
        let Some(delta) = m.full_piv_lu().solve(&rhs) else {
            break;
        };
        let mut coeffs = best.coeffs().to_vec();
        for k in 0..n {
            coeffs[n - k] += delta[k];
        }
        let next = Polynomial::new(coeffs);
        let res = residual(&next);
        if res < best_res && next.is_hurwitz(0.0) {
            best = next;
            best_res = res;
        } else {
            break;
        }
    }
    best
}
