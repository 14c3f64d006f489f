//! Optimal-transient stabilizer and the coprime-factor 2-DOF parameterization
//! built on it.

use crate::error::{Error, Result};
use crate::lti::{max_response_error, RationalTf};
use crate::polynomial::{solve_diophantine, spectral_factor, Polynomial, DEFAULT_TOL};

/// Plant factors `b / a` with `a` monic and `b` of lower degree.
fn plant_pair(plant: &RationalTf) -> Result<(Polynomial, Polynomial)> {
    if !plant.is_strictly_proper() {
        return Err(Error::NotStrictlyProper);
    }
    let p = plant.normalized();
    Ok((p.den().clone(), p.num().clone()))
}

/// The unique strictly proper pole-placement controller `C0 = q / p` with
/// `a p + b q = d^2`, and its transient cost.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalStabilizer {
    pub a: Polynomial,
    pub b: Polynomial,
    pub p: Polynomial,
    pub q: Polynomial,
    pub d: Polynomial,
    pub j_star: f64,
}

impl OptimalStabilizer {
    /// `C0 = q / p`.
    pub fn controller(&self) -> Result<RationalTf> {
        RationalTf::unreduced(self.q.clone(), self.p.clone())
    }

    /// Relative residual of `a p + b q - d^2`.
    pub fn residual(&self) -> f64 {
        (&(&self.a * &self.p) + &(&self.b * &self.q)).relative_distance(&(&self.d * &self.d))
    }
}

/// Spectral factor, pole-placement solve and closed-form optimal cost
/// `||(d-a)/d||^2 + ||b/d||^2 + ||(d-p)/d||^2 + ||q/d||^2`.
pub fn optimal_stabilizer(plant: &RationalTf) -> Result<OptimalStabilizer> {
    let (a, b) = plant_pair(plant)?;
    let d = spectral_factor(&a, &b, DEFAULT_TOL)?;
    let (p, q) = solve_diophantine(&a, &b, &(&d * &d))?;
    let norm = |num: Polynomial| -> Result<f64> { RationalTf::unreduced(num, d.clone())?.h2_norm_sq() };
    let j_star = norm(&d - &a)? + norm(b.clone())? + norm(&d - &p)? + norm(q.clone())?;
    Ok(OptimalStabilizer { a, b, p, q, d, j_star })
}

/// Closed-loop matrix of the unity loop around `plant` and `c`:
/// `[[PC, C], [P, -PC]] / (1 + PC)`, each entry reduced.
pub fn gang_of_four(plant: &RationalTf, c: &RationalTf) -> Result<[[RationalTf; 2]; 2]> {
    let (a, b) = (plant.den(), plant.num());
    let (p, q) = (c.den(), c.num());
    let chi = &(a * p) + &(b * q);
    if chi.is_zero() {
        return Err(Error::AlgebraicLoop);
    }
    let entry = |num: Polynomial| -> Result<RationalTf> { Ok(RationalTf::unreduced(num, chi.clone())?.reduced()) };
    let pc = entry(b * q)?;
    Ok([[pc.clone(), entry(a * q)?], [entry(b * p)?, pc.neg()]])
}

/// Sum of the squared H2 norms of the four closed-loop entries: the energy
/// of both outputs under unit impulses on both inputs.
pub fn transient_cost(plant: &RationalTf, c: &RationalTf) -> Result<f64> {
    let g = gang_of_four(plant, c)?;
    let entries = g.iter().flatten();
    if !entries.clone().all(|e| e.is_zero() || e.is_stable(0.0)) {
        return Err(Error::NotInternallyStable);
    }
    if !entries.clone().all(RationalTf::is_strictly_proper) {
        return Err(Error::InfiniteCost);
    }
    entries.map(RationalTf::h2_norm_sq).sum()
}

/// Stable coprime factors over the common denominator `d`. Kept unreduced:
/// the shared denominator is structural, and nearby plant roots must not be
/// mistaken for cancellations.
#[derive(Debug, Clone, PartialEq)]
pub struct CoprimeFactors {
    pub m: RationalTf,
    pub n: RationalTf,
    pub x: RationalTf,
    pub y: RationalTf,
}

impl CoprimeFactors {
    /// `max |M X + N Y - 1|` over the given frequencies.
    pub fn bezout_residual(&self, omegas: &[f64]) -> f64 {
        omegas
            .iter()
            .map(|&w| {
                let s = num_complex::Complex64::new(0.0, w);
                (self.m.eval(s) * self.x.eval(s) + self.n.eval(s) * self.y.eval(s) - 1.0).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn d(&self) -> &Polynomial {
        self.m.den()
    }
}

/// `M = a/d`, `N = b/d`, `X = p/d`, `Y = q/d`.
pub fn coprime_factors(stab: &OptimalStabilizer, plant: &RationalTf) -> Result<CoprimeFactors> {
    let (a, b) = plant_pair(plant)?;
    if a.relative_distance(&stab.a) > 1e-12 || b.relative_distance(&stab.b) > 1e-12 {
        return Err(Error::InvalidParameter(
            "stabilizer was built for a different plant".into(),
        ));
    }
    let f = |num: &Polynomial| RationalTf::unreduced(num.clone(), stab.d.clone());
    Ok(CoprimeFactors {
        m: f(&stab.a)?,
        n: f(&stab.b)?,
        x: f(&stab.p)?,
        y: f(&stab.q)?,
    })
}

/// Second-order reference target `w^2 / (s^2 + 2 xi w s + w^2)`.
pub fn second_order(omega: f64, xi: f64) -> Result<RationalTf> {
    if !(omega > 0.0) || !(xi > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "second-order target needs positive frequency and damping, got {omega}, {xi}"
        )));
    }
    RationalTf::unreduced(
        Polynomial::constant(omega * omega),
        Polynomial::new(vec![1.0, 2.0 * xi * omega, omega * omega]),
    )
}

/// `Q1 = w^2 d / (b (s^2 + 2 xi w s + w^2))`, so that `N Q1` is the
/// second-order target. Requires a minimum-phase plant numerator. The result
/// may be improper for low-order plants; see [`RationalTf::is_proper`].
pub fn design_q1(factors: &CoprimeFactors, omega_bar: f64, xi_bar: f64) -> Result<RationalTf> {
    let target = second_order(omega_bar, xi_bar)?;
    let b = factors.n.num();
    if !b.is_hurwitz(DEFAULT_TOL) {
        return Err(Error::NonMinimumPhasePlant);
    }
    RationalTf::unreduced(target.num() * factors.d(), b * target.den())
}

/// First-order low-pass `1 / (s / (2 pi f) + 1)`.
pub fn design_q2(corner_hz: f64) -> Result<RationalTf> {
    if !(corner_hz > 0.0) || !corner_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "corner must be positive, got {corner_hz}"
        )));
    }
    let wc = 2.0 * std::f64::consts::PI * corner_hz;
    RationalTf::unreduced(Polynomial::constant(wc), Polynomial::new(vec![1.0, wc]))
}

/// 2-DOF controller `u = C1 r - C2 y`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoDofController {
    pub factors: CoprimeFactors,
    pub q1: RationalTf,
    pub q2: RationalTf,
    /// `Q1 / (X - N Q2)`.
    pub c1: RationalTf,
    /// `(Y + M Q2) / (X - N Q2)`.
    pub c2: RationalTf,
}

/// Assembles `C1` and `C2` from the factors. With `Q2 = n2/d2`,
/// `X - N Q2 = (p d2 - b n2) / (d d2)` and `Y + M Q2 = (q d2 + a n2) / (d d2)`;
/// the common `d d2` is cancelled symbolically.
pub fn assemble_2dof(factors: &CoprimeFactors, q1: &RationalTf, q2: &RationalTf) -> Result<TwoDofController> {
    for q in [q1, q2] {
        if !q.is_zero() && !q.reduced().is_stable(0.0) {
            return Err(Error::Unstable);
        }
    }
    let (a, b, p, qq, d) = (
        factors.m.num(),
        factors.n.num(),
        factors.x.num(),
        factors.y.num(),
        factors.d(),
    );
    let (n2, d2) = (q2.num(), q2.den());
    let den = &(p * d2) - &(b * n2);
    let scale = (p * d2).max_abs_coeff().max((b * n2).max_abs_coeff());
    if den.max_abs_coeff() <= 1e-14 * scale {
        return Err(Error::DegenerateDenominator);
    }
    let c2 = RationalTf::unreduced(&(qq * d2) + &(a * n2), den.clone())?;
    let c1 = RationalTf::unreduced(&(q1.num() * d) * d2, q1.den() * &den)?;
    Ok(TwoDofController {
        factors: factors.clone(),
        q1: q1.clone(),
        q2: q2.clone(),
        c1,
        c2,
    })
}

/// Closed-loop maps of `u = C1 r - C2 y`, `v = u + d`, `z = P v`,
/// `y = z + n`. Rows are ordered `u, v, y, z`; `dn[k] = [from d, from n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopMaps {
    pub r: [RationalTf; 4],
    pub dn: [[RationalTf; 2]; 4],
}

impl ClosedLoopMaps {
    pub fn all(&self) -> impl Iterator<Item = &RationalTf> {
        self.r.iter().chain(self.dn.iter().flatten())
    }

    /// Every map stable after reduction.
    pub fn is_stable(&self) -> bool {
        self.all().all(|g| g.is_zero() || g.reduced().is_stable(0.0))
    }

    /// Largest relative mismatch against another set of maps.
    pub fn max_error(&self, other: &ClosedLoopMaps, omegas: &[f64]) -> f64 {
        self.all()
            .zip(other.all())
            .map(|(g, h)| max_response_error(g, h, omegas))
            .fold(0.0, f64::max)
    }
}

/// Maps computed directly from the loop equations with `P = b/a`,
/// `C1 = c1n/c1d`, `C2 = c2n/c2d` over `chi = a c2d + b c2n`.
pub fn closed_loop_maps(ctl: &TwoDofController, plant: &RationalTf) -> Result<ClosedLoopMaps> {
    let (a, b) = (plant.den(), plant.num());
    let (c1n, c1d) = (ctl.c1.num(), ctl.c1.den());
    let (c2n, c2d) = (ctl.c2.num(), ctl.c2.den());
    let chi = &(a * c2d) + &(b * c2n);
    if chi.is_zero() {
        return Err(Error::AlgebraicLoop);
    }
    let over = |num: Polynomial, den: &Polynomial| RationalTf::unreduced(num, den.clone());
    let chi_r = c1d * &chi;
    let ru = over(&(c1n * a) * c2d, &chi_r)?;
    let ry = over(&(c1n * b) * c2d, &chi_r)?;
    let du = over(-(b * c2n), &chi)?;
    let dv = over(a * c2d, &chi)?;
    let dy = over(b * c2d, &chi)?;
    let nu = over(-(a * c2n), &chi)?;
    Ok(ClosedLoopMaps {
        r: [ru.clone(), ru, ry.clone(), ry],
        dn: [
            [du, nu.clone()],
            [dv.clone(), nu],
            [dy.clone(), dv],
            [dy, over(-(b * c2n), &chi)?],
        ],
    })
}

/// The same maps expressed through the factors: the reference maps are
/// `[M, M, N, N] Q1`; the disturbance and noise maps are affine in `Q2`.
pub fn factor_maps(factors: &CoprimeFactors, q1: &RationalTf, q2: &RationalTf) -> ClosedLoopMaps {
    let CoprimeFactors { m, n, x, y } = factors;
    let mul = |g: &RationalTf, h: &RationalTf| g.series_unreduced(h);
    let mq1 = mul(m, q1);
    let nq1 = mul(n, q1);
    let ny = mul(n, y);
    let my = mul(m, y);
    let mx = mul(m, x);
    let nx = mul(n, x);
    let mq2n = mul(&mul(m, q2), n);
    let mq2m = mul(&mul(m, q2), m);
    let nq2n = mul(&mul(n, q2), n);
    let nq2m = mul(&mul(n, q2), m);
    ClosedLoopMaps {
        r: [mq1.clone(), mq1, nq1.clone(), nq1],
        dn: [
            [ny.neg().sub_unreduced(&mq2n), my.neg().sub_unreduced(&mq2m)],
            [mx.sub_unreduced(&mq2n), my.neg().sub_unreduced(&mq2m)],
            [nx.sub_unreduced(&nq2n), mx.sub_unreduced(&nq2m)],
            [nx.sub_unreduced(&nq2n), ny.neg().sub_unreduced(&nq2m)],
        ],
    }
}

/// Full design: optimal stabilizer, factors, `Q1` for the second-order
/// reference target and the low-pass `Q2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub stabilizer: OptimalStabilizer,
    pub controller: TwoDofController,
}

pub fn design(plant: &RationalTf, omega_bar: f64, xi_bar: f64, q2_corner_hz: f64) -> Result<Design> {
    let stabilizer = optimal_stabilizer(plant)?;
    let factors = coprime_factors(&stabilizer, plant)?;
    let q1 = design_q1(&factors, omega_bar, xi_bar)?;
    let q2 = design_q2(q2_corner_hz)?;
    let controller = assemble_2dof(&factors, &q1, &q2)?;
    Ok(Design { stabilizer, controller })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::log_space;
    use proptest::prelude::*;

    fn tf(n: &[f64], d: &[f64]) -> RationalTf {
        RationalTf::unreduced(Polynomial::new(n.to_vec()), Polynomial::new(d.to_vec())).unwrap()
    }

    fn printed_plant() -> RationalTf {
        tf(&[0.2034, 245.1, 2.848e6, 5.761e8], &[1.0, 3340.0, 3.817e6, 6.54e8, 0.0])
    }

    /// Squared L2 norm of the impulse response of a stable transfer function
    /// with simple poles, by partial fractions:
    /// `sum_ij r_i conj(r_j) / -(p_i + conj(p_j))`.
    fn h2_by_residues(g: &RationalTf) -> f64 {
        let poles = g.poles().unwrap();
        let dd = g.den().derivative();
        let res: Vec<_> = poles
            .iter()
            .map(|&p| g.num().eval_complex(p) / dd.eval_complex(p))
            .collect();
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (ri, pi) in res.iter().zip(&poles) {
            for (rj, pj) in res.iter().zip(&poles) {
                acc += ri * rj.conj() / -(pi + pj.conj());
            }
        }
        acc.re
    }

    #[test]
    fn toy_plant_stabilizer() {
        let r2 = 2f64.sqrt();
        let s = optimal_stabilizer(&tf(&[1.0], &[1.0, 1.0])).unwrap();
        assert!(s.d.relative_distance(&Polynomial::new(vec![1.0, r2])) < 1e-15);
        assert!(s.p.relative_distance(&Polynomial::new(vec![1.0, 2.0 * r2 - 1.0])) < 1e-15);
        assert!(s.q.relative_distance(&Polynomial::new(vec![3.0 - 2.0 * r2])) < 1e-14);
        // Oracle: each term by residues.
        let terms = [
            tf(&[r2 - 1.0], &[1.0, r2]),
            tf(&[1.0], &[1.0, r2]),
            tf(&[1.0 - r2], &[1.0, r2]),
            tf(&[3.0 - 2.0 * r2], &[1.0, r2]),
        ];
        let oracle: f64 = terms.iter().map(h2_by_residues).sum();
        assert!((s.j_star - oracle).abs() < 1e-13, "{} vs {oracle}", s.j_star);
        assert!((s.j_star - 0.4853).abs() < 1e-4);
    }

    #[test]
    fn closed_form_cost_matches_impulse_energy() {
        let plant = tf(&[1.0], &[1.0, 1.0]);
        let s = optimal_stabilizer(&plant).unwrap();
        let j = transient_cost(&plant, &s.controller().unwrap()).unwrap();
        assert!((j - s.j_star).abs() <= 5e-3 * s.j_star);
        assert!((j - 0.48528).abs() < 1e-4);
    }

    #[test]
    fn printed_plant_stabilizer() {
        let plant = printed_plant();
        let s = optimal_stabilizer(&plant).unwrap();
        assert!(s.residual() < 1e-12);
        assert_eq!(s.p.degree(), 4);
        assert!(s.q.degree() <= 3);
        assert!(s.d.is_hurwitz(0.0));
        let c0 = s.controller().unwrap();
        let g = gang_of_four(&plant, &c0).unwrap();
        assert!(g.iter().flatten().all(|e| e.is_stable(0.0)));
        let j = transient_cost(&plant, &c0).unwrap();
        assert!((j - s.j_star).abs() <= 5e-3 * s.j_star, "{j} vs {}", s.j_star);
    }

    #[test]
    fn gang_of_four_examples() {
        let g = gang_of_four(&tf(&[1.0], &[1.0, 0.0]), &RationalTf::one()).unwrap();
        let w = log_space(0.1, 10.0, 5);
        assert!(max_response_error(&g[0][0], &tf(&[1.0], &[1.0, 1.0]), &w) < 1e-14);
        assert!(max_response_error(&g[0][1], &tf(&[1.0, 0.0], &[1.0, 1.0]), &w) < 1e-14);
        assert!(max_response_error(&g[1][0], &tf(&[1.0], &[1.0, 1.0]), &w) < 1e-14);
        assert!(max_response_error(&g[1][1], &tf(&[-1.0], &[1.0, 1.0]), &w) < 1e-14);
        let plant = tf(&[2.0], &[1.0, 3.0, 1.0]);
        let g = gang_of_four(&plant, &RationalTf::zero()).unwrap();
        assert!(g[0][0].is_zero() && g[0][1].is_zero() && g[1][1].is_zero());
        assert!(max_response_error(&g[1][0], &plant, &w) < 1e-14);
        assert_eq!(
            gang_of_four(&RationalTf::one(), &RationalTf::constant(-1.0)),
            Err(Error::AlgebraicLoop)
        );
    }

    #[test]
    fn cost_errors() {
        let plant = tf(&[1.0], &[1.0, 1.0]);
        assert_eq!(
            transient_cost(&plant, &RationalTf::constant(2.0)),
            Err(Error::InfiniteCost)
        );
        assert_eq!(
            transient_cost(&plant, &tf(&[-3.0], &[1.0, 1.0])),
            Err(Error::NotInternallyStable)
        );
    }

    #[test]
    fn toy_factors_and_q1() {
        let r2 = 2f64.sqrt();
        let plant = tf(&[1.0], &[1.0, 1.0]);
        let s = optimal_stabilizer(&plant).unwrap();
        let f = coprime_factors(&s, &plant).unwrap();
        let w = log_space(1e-3, 1e3, 50);
        assert!(max_response_error(&f.m, &tf(&[1.0, 1.0], &[1.0, r2]), &w) < 1e-15);
        assert!(max_response_error(&f.n, &tf(&[1.0], &[1.0, r2]), &w) < 1e-15);
        assert!(max_response_error(&f.x, &tf(&[1.0, 2.0 * r2 - 1.0], &[1.0, r2]), &w) < 1e-15);
        assert!(max_response_error(&f.y, &tf(&[3.0 - 2.0 * r2], &[1.0, r2]), &w) < 1e-14);
        assert!(f.bezout_residual(&w) < 1e-8);
        let ratio = f.n.div_unreduced(&f.m).unwrap().reduced();
        assert!(max_response_error(&ratio, &plant, &w) < 1e-14);

        let (wb, xb) = (3.0, 0.7);
        let q1 = design_q1(&f, wb, xb).unwrap();
        let expect = tf(&[wb * wb, wb * wb * r2], &[1.0, 2.0 * xb * wb, wb * wb]);
        assert!(max_response_error(&q1, &expect, &w) < 1e-14);
        assert!(q1.is_proper() && q1.is_stable(0.0));
    }

    #[test]
    fn q2_examples() {
        let q2 = design_q2(50.0).unwrap();
        let wc = 100.0 * std::f64::consts::PI;
        assert_eq!(q2.dc_gain().unwrap(), 1.0);
        assert!((q2.freq_response(wc).unwrap().norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((q2.poles().unwrap()[0].re + wc).abs() < 1e-12);
    }

    #[test]
    fn q1_requires_minimum_phase() {
        let plant = tf(&[-1.0, 1.0], &[1.0, 3.0, 2.0]);
        let s = optimal_stabilizer(&plant).unwrap();
        let f = coprime_factors(&s, &plant).unwrap();
        assert_eq!(design_q1(&f, 1.0, 0.7), Err(Error::NonMinimumPhasePlant));
    }

    #[test]
    fn q2_zero_recovers_stabilizer() {
        let plant = printed_plant();
        let s = optimal_stabilizer(&plant).unwrap();
        let f = coprime_factors(&s, &plant).unwrap();
        let ctl = assemble_2dof(&f, &f.y, &RationalTf::zero()).unwrap();
        let c0 = s.controller().unwrap();
        let w = log_space(0.1, 1e5, 50);
        assert!(max_response_error(&ctl.c2, &c0, &w) < 1e-12);
        assert!(max_response_error(&ctl.c1, &c0, &w) < 1e-12);
        let maps = closed_loop_maps(&ctl, &plant).unwrap();
        let nq1 = f.n.series_unreduced(&f.y);
        assert!(max_response_error(&maps.r[3], &nq1, &w) < 1e-8);
    }

    #[test]
    fn printed_design() {
        let plant = printed_plant();
        let design = design(&plant, 451.24, 0.826, 50.0).unwrap();
        let ctl = &design.controller;
        let w = log_space(0.1, 1e5, 50);
        assert!(ctl.factors.bezout_residual(&w) < 1e-8);
        let maps = closed_loop_maps(ctl, &plant).unwrap();
        assert!(maps.is_stable());
        let target = second_order(451.24, 0.826).unwrap();
        assert!(max_response_error(&maps.r[3], &target, &w) < 1e-6);
        let nq1 = ctl.factors.n.series_unreduced(&ctl.q1);
        assert!((nq1.dc_gain().unwrap() - 1.0).abs() < 1e-12);
        let expected = factor_maps(&ctl.factors, &ctl.q1, &ctl.q2);
        assert!(
            maps.max_error(&expected, &w) < 1e-6,
            "{}",
            maps.max_error(&expected, &w)
        );
    }

    #[test]
    fn maps_decouple() {
        let plant = printed_plant();
        let s = optimal_stabilizer(&plant).unwrap();
        let f = coprime_factors(&s, &plant).unwrap();
        let q1 = design_q1(&f, 451.24, 0.826).unwrap();
        let q1b = design_q1(&f, 300.0, 0.6).unwrap();
        let q2 = design_q2(50.0).unwrap();
        let q2b = design_q2(20.0).unwrap();
        let w = log_space(0.1, 1e5, 50);
        let base = closed_loop_maps(&assemble_2dof(&f, &q1, &q2).unwrap(), &plant).unwrap();
        let other_q1 = closed_loop_maps(&assemble_2dof(&f, &q1b, &q2).unwrap(), &plant).unwrap();
        let other_q2 = closed_loop_maps(&assemble_2dof(&f, &q1, &q2b).unwrap(), &plant).unwrap();
        for (g, h) in base.dn.iter().flatten().zip(other_q1.dn.iter().flatten()) {
            assert!(max_response_error(g, h, &w) < 1e-6);
        }
        for (g, h) in base.r.iter().zip(&other_q2.r) {
            assert!(max_response_error(g, h, &w) < 1e-6);
        }
    }

    #[test]
    fn degenerate_denominator() {
        // Q2 = X / N makes X - N Q2 vanish.
        let plant = tf(&[1.0], &[1.0, 1.0]);
        let s = optimal_stabilizer(&plant).unwrap();
        let f = coprime_factors(&s, &plant).unwrap();
        let exact = RationalTf::unreduced(s.p.clone(), Polynomial::one()).unwrap();
        assert_eq!(assemble_2dof(&f, &f.y, &exact), Err(Error::DegenerateDenominator));
    }

    proptest! {
        #[test]
        fn optimal_cost_is_minimal(alpha in 0.1f64..10.0, beta in -0.9f64..10.0) {
            // C = beta / (s + alpha) on P = 1/(s+1): stable iff
            // (s+1)(s+alpha) + beta is Hurwitz.
            prop_assume!(alpha + 1.0 > 0.0 && alpha + beta > 0.0);
            let plant = tf(&[1.0], &[1.0, 1.0]);
            let j_star = optimal_stabilizer(&plant).unwrap().j_star;
            let j = transient_cost(&plant, &tf(&[beta], &[1.0, alpha])).unwrap();
            prop_assert!(j >= j_star * (1.0 - 1e-12));
        }

        #[test]
        fn random_plants_round_trip(
            poles in prop::collection::vec(0.1f64..50.0, 1..=5),
            zeros in prop::collection::vec(0.1f64..50.0, 0..=4),
            gain in 0.1f64..100.0,
        ) {
            prop_assume!(zeros.len() < poles.len());
            let roots = |v: &[f64]| v.iter().map(|&r| num_complex::Complex64::new(-r, 0.0)).collect::<Vec<_>>();
            let a = Polynomial::from_roots(1.0, &roots(&poles));
            let b = Polynomial::from_roots(gain, &roots(&zeros));
            prop_assume!(crate::polynomial::coprime(&a, &b, 1e-3).unwrap());
            let plant = RationalTf::unreduced(b, a).unwrap();
            let s = optimal_stabilizer(&plant).unwrap();
            prop_assert!(s.residual() < 1e-8, "residual {}", s.residual());
            prop_assert!(s.d.is_hurwitz(0.0));
            let f = coprime_factors(&s, &plant).unwrap();
            prop_assert!(f.bezout_residual(&log_space(1e-2, 1e3, 50)) < 1e-8);
        }
    }
}
