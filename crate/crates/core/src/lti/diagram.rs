use nalgebra::DMatrix;

use super::{RationalTf, StateSpace};
use crate::error::{Error, Result};

/// Signal source inside a [`Diagram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    /// External input channel.
    Input(usize),
    /// Output of a block, by the index returned from [`Diagram::add_block`].
    Block(usize),
}

/// Interconnection of SISO blocks into one state-space system.
///
/// Each block input is a weighted sum of ports; each diagram output is a
/// weighted sum of ports. Algebraic loops through biproper blocks are
/// resolved exactly when they are well posed.
#[derive(Debug, Clone)]
pub struct Diagram {
    inputs: usize,
    blocks: Vec<StateSpace>,
    wiring: Vec<(Port, usize, f64)>,
    outputs: Vec<Vec<(Port, f64)>>,
}

impl Diagram {
    pub fn new(inputs: usize) -> Self {
        Self {
            inputs,
            blocks: Vec::new(),
            wiring: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_block(&mut self, g: &RationalTf) -> Result<usize> {
        self.blocks.push(StateSpace::from_tf(g)?);
        Ok(self.blocks.len() - 1)
    }

    /// Adds `gain * from` to the input of block `to`.
    pub fn connect(&mut self, from: Port, to: usize, gain: f64) -> &mut Self {
        self.wiring.push((from, to, gain));
        self
    }

    /// Declares an output as a weighted sum of ports; returns its index.
    pub fn add_output(&mut self, terms: &[(Port, f64)]) -> usize {
        self.outputs.push(terms.to_vec());
        self.outputs.len() - 1
    }

    fn check(&self, port: Port) -> Result<()> {
        match port {
            Port::Input(i) if i >= self.inputs => Err(Error::Dimension(format!("input {i} of {}", self.inputs))),
            Port::Block(j) if j >= self.blocks.len() => {
                Err(Error::Dimension(format!("block {j} of {}", self.blocks.len())))
            }
            _ => Ok(()),
        }
    }

    /// Closed interconnection with `x' = A x + B e`, `out = C x + D e`.
    pub fn build(&self) -> Result<StateSpace> {
        let m = self.blocks.len();
        let orders: Vec<usize> = self.blocks.iter().map(StateSpace::order).collect();
        let n: usize = orders.iter().sum();
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut b = DMatrix::<f64>::zeros(n, m);
        let mut c = DMatrix::<f64>::zeros(m, n);
        let mut d = DMatrix::<f64>::zeros(m, m);
        let mut off = 0;
        for (j, blk) in self.blocks.iter().enumerate() {
            let k = orders[j];
            a.view_mut((off, off), (k, k)).copy_from(blk.a());
            b.view_mut((off, j), (k, 1)).copy_from(blk.b());
            c.view_mut((j, off), (1, k)).copy_from(blk.c());
            d[(j, j)] = blk.d()[(0, 0)];
            off += k;
        }

        // Block inputs: u_b = Ky y_b + Ke e.
        let mut ky = DMatrix::<f64>::zeros(m, m);
        let mut ke = DMatrix::<f64>::zeros(m, self.inputs);
        for &(from, to, gain) in &self.wiring {
            self.check(from)?;
            self.check(Port::Block(to))?;
            match from {
                Port::Input(i) => ke[(to, i)] += gain,
                Port::Block(j) => ky[(to, j)] += gain,
            }
        }
        let p = self.outputs.len();
        let mut oy = DMatrix::<f64>::zeros(p, m);
        let mut oe = DMatrix::<f64>::zeros(p, self.inputs);
        for (o, terms) in self.outputs.iter().enumerate() {
            for &(port, gain) in terms {
                self.check(port)?;
                match port {
                    Port::Input(i) => oe[(o, i)] += gain,
                    Port::Block(j) => oy[(o, j)] += gain,
                }
            }
        }

        // y_b = F (C x + D Ke e), F = (I - D Ky)^-1.
        let loop_matrix = DMatrix::<f64>::identity(m, m) - &d * &ky;
        let f = if m == 0 {
            loop_matrix
        } else {
            let sv = loop_matrix.clone().singular_values();
            if sv.min() <= 1e-12 * sv.max().max(1.0) {
                return Err(Error::AlgebraicLoop);
            }
            loop_matrix.try_inverse().ok_or(Error::AlgebraicLoop)?
        };
        let fc = &f * &c;
        let fdke = &f * &d * &ke;
        let a_cl = &a + &b * &ky * &fc;
        let b_cl = &b * &ky * &fdke + &b * &ke;
        let c_cl = &oy * &fc;
        let d_cl = &oy * &fdke + &oe;
        StateSpace::new(a_cl, b_cl, c_cl, d_cl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::log_space;

    fn tf(n: &[f64], d: &[f64]) -> RationalTf {
        RationalTf::from_coeffs(n, d).unwrap()
    }

    #[test]
    fn unity_feedback_matches_closed_form() {
        // Integrator in a unity loop: 1 / (s + 1).
        let mut dg = Diagram::new(1);
        let g = dg.add_block(&tf(&[1.0], &[1.0, 0.0])).unwrap();
        dg.connect(Port::Input(0), g, 1.0).connect(Port::Block(g), g, -1.0);
        dg.add_output(&[(Port::Block(g), 1.0)]);
        let ss = dg.build().unwrap();
        let h = tf(&[1.0], &[1.0, 1.0]);
        for w in log_space(0.01, 100.0, 7) {
            let a = ss.freq_response(w).unwrap();
            assert!((a - h.freq_response(w).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn biproper_loop_is_resolved() {
        // Controller k = 2 (static) around plant 1/(s+1): 2/(s+3).
        let mut dg = Diagram::new(1);
        let k = dg.add_block(&RationalTf::constant(2.0)).unwrap();
        let g = dg.add_block(&tf(&[1.0], &[1.0, 1.0])).unwrap();
        dg.connect(Port::Input(0), k, 1.0)
            .connect(Port::Block(g), k, -1.0)
            .connect(Port::Block(k), g, 1.0);
        dg.add_output(&[(Port::Block(g), 1.0)]);
        dg.add_output(&[(Port::Block(k), 1.0)]);
        let ss = dg.build().unwrap();
        assert_eq!(ss.outputs(), 2);
        let y = tf(&[2.0], &[1.0, 3.0]);
        let u = tf(&[2.0, 2.0], &[1.0, 3.0]);
        for w in log_space(0.01, 100.0, 7) {
            assert!((ss.freq_response_entry(w, 0, 0).unwrap() - y.freq_response(w).unwrap()).norm() < 1e-14);
            assert!((ss.freq_response_entry(w, 1, 0).unwrap() - u.freq_response(w).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn ill_posed_loop() {
        let mut dg = Diagram::new(1);
        let k = dg.add_block(&RationalTf::one()).unwrap();
        dg.connect(Port::Block(k), k, 1.0);
        assert!(matches!(dg.build(), Err(Error::AlgebraicLoop)));
        dg.connect(Port::Input(3), k, 1.0);
        assert!(matches!(dg.build(), Err(Error::Dimension(_))));
    }
}
