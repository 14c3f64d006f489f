//! Plain-text controller file. Same section syntax as the config; every
//! polynomial is a whitespace-separated coefficient list, highest degree
//! first, written with 17 significant digits.

use std::fmt::Write;

use anyhow::{anyhow, Context, Result};
use cablesea::lti::RationalTf;
use cablesea::polynomial::Polynomial;
use cablesea::sim::format_float;
use cablesea::synthesis::{CoprimeFactors, Design, TwoDofController};
use ini::Ini;

use crate::config::{parse_coeffs, TorqueTuning};

/// Everything the synthesis produces, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerFile {
    pub tuning: TorqueTuning,
    pub j_star: f64,
    pub plant: RationalTf,
    pub d: Polynomial,
    pub p: Polynomial,
    pub q: Polynomial,
    pub controller: TwoDofController,
}

fn coeffs(p: &Polynomial) -> String {
    p.coeffs()
        .iter()
        .map(|&c| format_float(c))
        .collect::<Vec<_>>()
        .join(" ")
}

fn tf_section(out: &mut String, name: &str, g: &RationalTf) {
    writeln!(out, "\n[{name}]\nnum = {}\nden = {}", coeffs(g.num()), coeffs(g.den())).unwrap();
}

impl ControllerFile {
    pub fn new(plant: &RationalTf, tuning: TorqueTuning, design: &Design) -> Self {
        let s = &design.stabilizer;
        Self {
            tuning,
            j_star: s.j_star,
            plant: plant.clone(),
            d: s.d.clone(),
            p: s.p.clone(),
            q: s.q.clone(),
            controller: design.controller.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# 2-DOF torque controller\n");
        writeln!(
            out,
            "\n[design]\nomega_bar = {}\nxi_bar = {}\nq2_corner_hz = {}\nj_star = {}",
            format_float(self.tuning.omega_bar),
            format_float(self.tuning.xi_bar),
            format_float(self.tuning.q2_corner_hz),
            format_float(self.j_star)
        )
        .unwrap();
        tf_section(&mut out, "plant", &self.plant);
        writeln!(
            out,
            "\n[stabilizer]\nd = {}\np = {}\nq = {}",
            coeffs(&self.d),
            coeffs(&self.p),
            coeffs(&self.q)
        )
        .unwrap();
        let c = &self.controller;
        let f = &c.factors;
        for (name, g) in [
            ("M", &f.m),
            ("N", &f.n),
            ("X", &f.x),
            ("Y", &f.y),
            ("Q1", &c.q1),
            ("Q2", &c.q2),
            ("C1", &c.c1),
            ("C2", &c.c2),
        ] {
            tf_section(&mut out, name, g);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| anyhow!("line {}: {}", e.line, e.msg))?;
        let get = |sec: &str, key: &str| -> Result<&str> {
            ini.section(Some(sec))
                .and_then(|s| s.get(key))
                .ok_or_else(|| anyhow!("missing [{sec}] {key}"))
        };
        let num = |sec: &str, key: &str| -> Result<f64> {
            get(sec, key)?
                .trim()
                .parse::<f64>()
                .with_context(|| format!("[{sec}] {key}"))
        };
        let poly = |sec: &str, key: &str| parse_coeffs(get(sec, key)?).with_context(|| format!("[{sec}] {key}"));
        let tf = |sec: &str| -> Result<RationalTf> { Ok(RationalTf::unreduced(poly(sec, "num")?, poly(sec, "den")?)?) };
        Ok(Self {
            tuning: TorqueTuning {
                omega_bar: num("design", "omega_bar")?,
                xi_bar: num("design", "xi_bar")?,
                q2_corner_hz: num("design", "q2_corner_hz")?,
            },
            j_star: num("design", "j_star")?,
            plant: tf("plant")?,
            d: poly("stabilizer", "d")?,
            p: poly("stabilizer", "p")?,
            q: poly("stabilizer", "q")?,
            controller: TwoDofController {
                factors: CoprimeFactors {
                    m: tf("M")?,
                    n: tf("N")?,
                    x: tf("X")?,
                    y: tf("Y")?,
                },
                q1: tf("Q1")?,
                q2: tf("Q2")?,
                c1: tf("C1")?,
                c2: tf("C2")?,
            },
        })
    }
}
