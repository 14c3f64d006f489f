//! Line-based configuration: `[section]` headers followed by `key = value`
//! lines; `#` and `;` start comment lines. Scenarios use one
//! `[scenario <name>]` section each.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use cablesea::lti::RationalTf;
use cablesea::polynomial::Polynomial;
use cablesea::sea::{torque_plant, tune_pi, MotorParams, PiGains, SeaParams};
use cablesea::sim::{NoiseSpec, PdController, Reference, Scenario, Target};
use ini::Ini;

/// Damping of the PI velocity loop, plus optional fixed gains used to build
/// the torque plant in place of the tuned ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityTuning {
    pub xi: f64,
    pub kpv: Option<f64>,
    pub kiv: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueTuning {
    pub omega_bar: f64,
    pub xi_bar: f64,
    pub q2_corner_hz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub sea: SeaParams,
    pub velocity: VelocityTuning,
    pub torque: TorqueTuning,
    pub pd: PdController,
    /// Replaces the physical torque plant when present.
    pub plant_override: Option<RationalTf>,
    pub scenarios: Vec<Scenario>,
    pub output_dir: PathBuf,
}

/// Keys of one section, consumed as they are read so leftovers can be
/// reported.
struct Section {
    name: String,
    values: HashMap<String, String>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<f64> {
        let v = self
            .take(key)
            .ok_or_else(|| anyhow!("[{}] missing key `{key}`", self.name))?;
        self.number(key, &v)
    }

    fn optional(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|v| self.number(key, &v)).transpose()
    }

    fn number(&self, key: &str, v: &str) -> Result<f64> {
        v.trim()
            .parse::<f64>()
            .with_context(|| format!("[{}] `{key}`: expected a number, got `{v}`", self.name))
    }

    fn finish(self) -> Result<()> {
        let mut keys: Vec<_> = self.values.keys().cloned().collect();
        keys.sort();
        match keys.first() {
            Some(k) => bail!("[{}] unknown key `{k}`", self.name),
            None => Ok(()),
        }
    }
}

/// Whitespace-separated coefficient list, highest degree first.
pub fn parse_coeffs(text: &str) -> Result<Polynomial> {
    let coeffs = text
        .split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("bad coefficient `{t}`")))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        bail!("empty coefficient list");
    }
    Ok(Polynomial::new(coeffs))
}

fn noise(sec: &mut Section, prefix: &str) -> Result<NoiseSpec> {
    let kind = sec.take(prefix).unwrap_or_else(|| "off".into());
    let std_key = format!("{prefix}_std");
    let seed_key = format!("{prefix}_seed");
    let hold_key = format!("{prefix}_hold");
    match kind.trim() {
        "off" => Ok(NoiseSpec::Off),
        "gaussian" => {
            let std = sec.required(&std_key)?;
            let seed = sec
                .take(&seed_key)
                .ok_or_else(|| anyhow!("[{}] missing key `{seed_key}`", sec.name))?;
            let seed = seed
                .trim()
                .parse::<u64>()
                .with_context(|| format!("[{}] `{seed_key}`: expected an unsigned integer", sec.name))?;
            let hold = sec.optional(&hold_key)?.unwrap_or(0.0);
            Ok(NoiseSpec::Gaussian { std, seed, hold })
        }
        other => bail!("[{}] `{prefix}`: expected off or gaussian, got `{other}`", sec.name),
    }
}

fn scenario(name: &str, sec: &mut Section) -> Result<Scenario> {
    let target = match sec.take("target").as_deref().map(str::trim) {
        None | Some("torque") => Target::Torque,
        Some("velocity") => Target::Velocity,
        Some(other) => bail!("[{}] `target`: expected torque or velocity, got `{other}`", sec.name),
    };
    let amplitude = sec.required("amplitude")?;
    let reference = match sec.take("reference").as_deref().map(str::trim) {
        Some("step") => Reference::Step { amplitude },
        Some("sinusoid") => Reference::Sinusoid {
            amplitude,
            freq_hz: sec.required("freq_hz")?,
        },
        Some(other) => bail!("[{}] `reference`: expected step or sinusoid, got `{other}`", sec.name),
        None => bail!("[{}] missing key `reference`", sec.name),
    };
    let sc = Scenario {
        name: name.to_string(),
        target,
        reference,
        disturbance: noise(sec, "disturbance")?,
        noise: noise(sec, "noise")?,
        duration: sec.required("duration")?,
        dt: sec.required("dt")?,
    };
    sc.validate()?;
    Ok(sc)
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        // rust-ini accepts `[name` without the closing bracket.
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.starts_with('[') && !line.ends_with(']') {
                bail!("line {}: unterminated section header", i + 1);
            }
        }
        let ini = Ini::load_from_str(text).map_err(|e| anyhow!("line {}: {}", e.line, e.msg))?;
        let mut sections: HashMap<String, Section> = HashMap::new();
        let mut scenarios = Vec::new();
        for (name, props) in ini.iter() {
            let Some(name) = name else {
                if let Some((k, _)) = props.iter().next() {
                    bail!("key `{k}` appears before any section");
                }
                continue;
            };
            let mut values = HashMap::new();
            for (k, v) in props.iter() {
                if values.insert(k.to_string(), v.to_string()).is_some() {
                    bail!("[{name}] duplicate key `{k}`");
                }
            }
            let sec = Section {
                name: name.to_string(),
                values,
            };
            if let Some(sc_name) = name.strip_prefix("scenario ") {
                let sc_name = sc_name.trim();
                if sc_name.is_empty() {
                    bail!("scenario section without a name");
                }
                scenarios.push((sc_name.to_string(), sec));
            } else if sections.insert(name.to_string(), sec).is_some() {
                bail!("duplicate section [{name}]");
            }
        }
        let mut section = |name: &str| -> Result<Section> {
            sections.remove(name).ok_or_else(|| anyhow!("missing section [{name}]"))
        };

        let mut m = section("motor")?;
        let motor = MotorParams {
            j: m.required("J")?,
            la: m.required("La")?,
            ra: m.required("Ra")?,
            kt: m.required("Kt")?,
            kb: m.required("Kb")?,
            kf: m.required("Kf")?,
        };
        m.finish()?;
        let mut s = section("spring")?;
        let sea = SeaParams {
            motor,
            ks: s.required("Ks")?,
            kg: s.required("Kg")?,
            cs: s.required("Cs")?,
            ms: s.required("Ms")?,
            jl: s.required("Jl")?,
        };
        s.finish()?;
        sea.validate()?;

        let mut v = section("velocity")?;
        let velocity = VelocityTuning {
            xi: v.required("xi")?,
            kpv: v.optional("kpv")?,
            kiv: v.optional("kiv")?,
        };
        v.finish()?;
        if velocity.kpv.is_some() != velocity.kiv.is_some() {
            bail!("[velocity] kpv and kiv must be given together");
        }

        let mut t = section("torque")?;
        let torque = TorqueTuning {
            omega_bar: t.required("omega_bar")?,
            xi_bar: t.required("xi_bar")?,
            q2_corner_hz: t.required("q2_corner_hz")?,
        };
        t.finish()?;

        let mut p = section("pd")?;
        let pd = PdController {
            kp: p.required("kp")?,
            kd: p.required("kd")?,
            omega_f: p.optional("omega_f")?.unwrap_or(8e3),
        };
        p.finish()?;

        let plant_override = match sections.remove("plant") {
            None => None,
            Some(mut pl) => {
                let num = pl.take("num").ok_or_else(|| anyhow!("[plant] missing key `num`"))?;
                let den = pl.take("den").ok_or_else(|| anyhow!("[plant] missing key `den`"))?;
                pl.finish()?;
                Some(RationalTf::unreduced(
                    parse_coeffs(&num).context("[plant] num")?,
                    parse_coeffs(&den).context("[plant] den")?,
                )?)
            }
        };

        let output_dir = match sections.remove("output") {
            None => PathBuf::from("out"),
            Some(mut o) => {
                let dir = o.take("dir").unwrap_or_else(|| "out".into());
                o.finish()?;
                PathBuf::from(dir.trim())
            }
        };

        let mut leftover: Vec<_> = sections.keys().cloned().collect();
        leftover.sort();
        if let Some(name) = leftover.first() {
            bail!("unknown section [{name}]");
        }

        let mut parsed: Vec<Scenario> = Vec::new();
        for (name, mut sec) in scenarios {
            if parsed.iter().any(|s| s.name == name) {
                bail!("duplicate scenario `{name}`");
            }
            let sc = scenario(&name, &mut sec)?;
            sec.finish()?;
            parsed.push(sc);
        }

        Ok(Self {
            sea,
            velocity,
            torque,
            pd,
            plant_override,
            scenarios: parsed,
            output_dir,
        })
    }

    pub fn scenario(&self, name: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.name == name)
    }

    /// Replaces every Gaussian seed: disturbance `seed`, noise `seed + 1`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        for sc in &mut self.scenarios {
            if let NoiseSpec::Gaussian { seed: s, .. } = &mut sc.disturbance {
                *s = seed;
            }
            if let NoiseSpec::Gaussian { seed: s, .. } = &mut sc.noise {
                *s = seed.wrapping_add(1);
            }
        }
        self
    }

    /// PI gains by pole cancellation.
    pub fn tuned_gains(&self) -> Result<PiGains> {
        Ok(tune_pi(&self.sea.motor, self.velocity.xi)?)
    }

    /// Gains the torque plant is built with: the fixed ones when given,
    /// otherwise the tuned ones.
    pub fn plant_gains(&self) -> Result<PiGains> {
        match (self.velocity.kpv, self.velocity.kiv) {
            (Some(kpv), Some(kiv)) => Ok(PiGains::from_gains(&self.sea.motor, kpv, kiv, self.velocity.xi)?),
            _ => self.tuned_gains(),
        }
    }

    /// Torque plant used for synthesis and simulation. With tuned gains the
    /// PI zero cancels a velocity-loop pole exactly and is reduced away.
    pub fn plant(&self) -> Result<RationalTf> {
        if let Some(p) = &self.plant_override {
            return Ok(p.clone());
        }
        let plant = torque_plant(&self.sea, &self.plant_gains()?)?;
        Ok(if self.velocity.kpv.is_some() {
            plant
        } else {
            plant.reduced()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULT_CFG: &str = include_str!("../../../paper.cfg");

    #[test]
    fn shipped_config_parses() {
        let cfg = Config::parse(DEFAULT_CFG).unwrap();
        assert_eq!(cfg.sea, SeaParams::nominal());
        assert_eq!(cfg.velocity.xi, 0.88);
        assert_eq!(cfg.torque.omega_bar, 451.24);
        assert_eq!(cfg.pd.kp, 490.0);
        for name in ["fig6", "fig8", "fig9"] {
            assert!(cfg.scenario(name).is_some(), "{name}");
        }
        assert_eq!(cfg.scenario("fig6").unwrap().target, Target::Velocity);
        let plant = cfg.plant().unwrap();
        assert_eq!(plant.den().degree(), 4);
    }

    #[test]
    fn seed_override() {
        let cfg = Config::parse(DEFAULT_CFG).unwrap().with_seed(40);
        let sc = cfg.scenario("fig9").unwrap();
        assert!(matches!(sc.disturbance, NoiseSpec::Gaussian { seed: 40, .. }));
        assert!(matches!(sc.noise, NoiseSpec::Gaussian { seed: 41, .. }));
    }

    #[test]
    fn tuned_plant_is_reduced() {
        let text = DEFAULT_CFG.replace("kpv = 0.26\n", "").replace("kiv = 53.5\n", "");
        let cfg = Config::parse(&text).unwrap();
        assert_eq!(cfg.plant().unwrap().den().degree(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            (DEFAULT_CFG.replace("Kt = 0.0525", "Kt = -1"), "Kt"),
            (DEFAULT_CFG.replace("Kt = 0.0525", "Kt = abc"), "expected a number"),
            (DEFAULT_CFG.replace("[pd]", "[pd]\nbogus = 1"), "unknown key `bogus`"),
            (DEFAULT_CFG.replace("[torque]", "[extra]\n[torque]"), "unknown section"),
            (
                DEFAULT_CFG.replace("[scenario fig9]", "[scenario fig8]"),
                "duplicate scenario",
            ),
            (DEFAULT_CFG.replace("[motor]", "[motor"), "line"),
        ];
        for (text, needle) in cases {
            let err = format!("{:#}", Config::parse(&text).unwrap_err());
            assert!(err.contains(needle), "{err}");
        }
    }
}
