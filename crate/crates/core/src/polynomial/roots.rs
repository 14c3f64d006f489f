use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::linalg;

pub(super) fn roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let zeros = p.zero_roots();
    let n = p.degree() - zeros;
    let mut out = Vec::with_capacity(p.degree());
    if n > 0 {
        let core = Polynomial::new(p.coeffs()[..=n].to_vec());
        let sigma = core.root_scale();
        let lead = core.leading();
        // Monic polynomial in w = s / sigma.
        let scaled: Vec<f64> = core
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c / (lead * sigma.powi(i as i32)))
            .collect();
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            companion[(0, j)] = -scaled[j + 1];
        }
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        let eig = linalg::eigenvalues(&companion)?;
        let raw: Vec<Complex64> = eig.into_iter().map(|z| z * sigma).collect();
        out.extend(polish_roots(&core, &raw));
    }
    out.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    sort_roots(&mut out);
    Ok(out)
}

/// Newton-polishes each root of the upper half plane and mirrors it to keep
/// exact conjugate symmetry. A step is kept only if it reduces |p(r)| and does
/// not move the root more than a quarter of the way to its nearest neighbour.
pub fn polish_roots(p: &Polynomial, roots: &[Complex64]) -> Vec<Complex64> {
    let dp = p.derivative();
    let mut upper: Vec<Complex64> = Vec::new();
    let mut real: Vec<Complex64> = Vec::new();
    for r in roots {
        if r.im.abs() <= 1e-12 * r.norm().max(f64::MIN_POSITIVE) {
            real.push(Complex64::new(r.re, 0.0));
        } else if r.im > 0.0 {
            upper.push(*r);
        }
    }
    let all: Vec<Complex64> = roots.to_vec();
    let polish = |r: Complex64, is_real: bool| -> Complex64 {
        let nearest = all
            .iter()
            .filter(|&&o| o != r)
            .map(|&o| (o - r).norm())
            .fold(f64::INFINITY, f64::min);
        let mut cur = r;
        let mut val = p.eval_complex(cur).norm();
        for _ in 0..4 {
            let d = dp.eval_complex(cur);
            if d.norm() == 0.0 || val == 0.0 {
                break;
            }
            let mut next = cur - p.eval_complex(cur) / d;
            if is_real {
                next.im = 0.0;
            }
            let nv = p.eval_complex(next).norm();
            if !(nv < val) || (next - r).norm() > 0.25 * nearest {
                break;
            }
            cur = next;
            val = nv;
        }
        cur
    };
    let mut out = Vec::with_capacity(roots.len());
    for r in real {
        out.push(polish(r, true));
    }
    for r in upper {
        let z = polish(r, false);
        out.push(z);
        out.push(z.conj());
    }
    out
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// True when no root of `a` lies within `rel_tol` (relative to magnitude) of a
/// root of `b`. A zero `b` is coprime only with constants.
pub fn coprime(a: &Polynomial, b: &Polynomial, rel_tol: f64) -> Result<bool> {
    if a.is_zero() && b.is_zero() {
        return Ok(false);
    }
    if a.is_zero() {
        return Ok(b.degree() == 0);
    }
    if b.is_zero() {
        return Ok(a.degree() == 0);
    }
    if a.degree() == 0 || b.degree() == 0 {
        return Ok(true);
    }
    let ra = a.roots()?;
    let rb = b.roots()?;
    Ok(min_relative_distance(&ra, &rb) > rel_tol)
}

pub(crate) fn min_relative_distance(ra: &[Complex64], rb: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for x in ra {
        for y in rb {
            let scale = x.norm().max(y.norm());
            let dist = (x - y).norm();
            let rel = if scale == 0.0 { 0.0 } else { dist / scale };
            best = best.min(rel);
        }
    }
    best
}
