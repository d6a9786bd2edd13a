use serde::Deserialize;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{Algorithm, Mode, TrialSpec};
use crate::error::{Error, Result};
use crate::oracles::MAX_EXHAUSTIVE_ELEMENTS;
use crate::phase::MAX_BITS;

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Number of IRS elements.
    Elements,
    /// Transmit power in dBm.
    Power,
    Nu,
    Bits,
    Tau,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Elements => "L",
            Axis::Power => "power",
            Axis::Nu => "nu",
            Axis::Bits => "b",
            Axis::Tau => "tau",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(Axis::Elements),
            "power" => Ok(Axis::Power),
            "nu" => Ok(Axis::Nu),
            "b" => Ok(Axis::Bits),
            "tau" => Ok(Axis::Tau),
            other => Err(Error::Config(format!(
                "unknown axis {other:?} (expected L, power, nu, b or tau)"
            ))),
        }
    }
}

/// Physical constants of the simulated link.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    pub power_dbm: f64,
    pub noise_dbm: f64,
    /// Reflection amplitude of every element.
    pub reflection: f64,
    pub amplifier_efficiency: f64,
    pub static_mw: f64,
    /// Per-element on-power with continuous phases; quantized phases use `1.8 b - 3` mW.
    pub on_mw: f64,
    pub off_mw: f64,
    pub rician_db: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            power_dbm: 15.0,
            noise_dbm: -95.0,
            reflection: 0.9,
            amplifier_efficiency: 0.8,
            static_mw: 10.0,
            on_mw: 15.0,
            off_mw: 0.3,
            rician_db: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub trials: u64,
    pub tau: f64,
    pub nu: f64,
    pub mode: Mode,
    pub bits: u32,
    /// Element count when the axis is not `L`.
    pub elements: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    pub threads: usize,
    pub system: SystemParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            axis: Axis::Elements,
            values: vec![20.0],
            trials: 100,
            tau: 0.0,
            nu: 0.7,
            mode: Mode::Continuous,
            bits: 4,
            elements: 20,
            algorithms: vec![Algorithm::Dp, Algorithm::AllOn],
            seed: 1,
            out: None,
            threads: 0,
            system: SystemParams::default(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    axis: Option<String>,
    values: Option<Vec<f64>>,
    trials: Option<u64>,
    tau: Option<f64>,
    nu: Option<f64>,
    mode: Option<String>,
    bits: Option<u32>,
    elements: Option<usize>,
    algorithms: Option<Vec<String>>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    threads: Option<usize>,
    system: Option<SystemParams>,
}

/// Parse a comma-separated list of numbers.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("not a number: {v:?}")))
        })
        .collect()
}

fn is_integer(v: f64) -> bool {
    v.is_finite() && v.fract() == 0.0
}

impl ExperimentConfig {
    /// Parse a TOML document; absent keys keep their defaults. Not validated.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: FileConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Self::default();
        if let Some(a) = file.axis {
            cfg.axis = a.parse()?;
        }
        if let Some(v) = file.values {
            cfg.values = v;
        }
        if let Some(v) = file.trials {
            cfg.trials = v;
        }
        if let Some(v) = file.tau {
            cfg.tau = v;
        }
        if let Some(v) = file.nu {
            cfg.nu = v;
        }
        if let Some(m) = file.mode {
            cfg.mode = m.parse()?;
        }
        if let Some(v) = file.bits {
            cfg.bits = v;
        }
        if let Some(v) = file.elements {
            cfg.elements = v;
        }
        if let Some(list) = file.algorithms {
            cfg.algorithms = list.iter().map(|a| a.parse()).collect::<Result<_>>()?;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if file.out.is_some() {
            cfg.out = file.out;
        }
        if let Some(v) = file.threads {
            cfg.threads = v;
        }
        if let Some(s) = file.system {
            cfg.system = s;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Element counts that the sweep will visit.
    pub fn element_counts(&self) -> Vec<usize> {
        match self.axis {
            Axis::Elements => self.values.iter().map(|v| *v as usize).collect(),
            _ => vec![self.elements],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        let unit = |name: &str, v: f64| -> Result<()> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        unit("tau", self.tau)?;
        unit("nu", self.nu)?;
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.values.is_empty() {
            return err("no axis values given".into());
        }
        if self.algorithms.is_empty() {
            return err("no algorithms given".into());
        }
        for &v in &self.values {
            match self.axis {
                Axis::Elements if !is_integer(v) || v < 1.0 => {
                    return err(format!("element counts must be positive integers, got {v}"))
                }
                Axis::Bits if !is_integer(v) || !(2.0..=MAX_BITS as f64).contains(&v) => {
                    return err(format!("bits must be an integer in 2..={MAX_BITS}, got {v}"))
                }
                Axis::Nu | Axis::Tau => unit(self.axis.name(), v)?,
                Axis::Power if !v.is_finite() => return err(format!("power must be finite, got {v}")),
                _ => {}
            }
        }
        if self.axis != Axis::Elements && self.elements == 0 {
            return err("elements must be at least 1".into());
        }
        match self.mode {
            Mode::Continuous => {
                if self.axis == Axis::Bits {
                    return err("the b axis needs discrete mode".into());
                }
                if self.algorithms.contains(&Algorithm::Crbm) {
                    return err("crbm is the quantized-phase solver; use --mode d".into());
                }
            }
            Mode::Discrete => {
                if self.algorithms.contains(&Algorithm::Dp) {
                    return err("dp is exact only for continuous phases; use --mode c".into());
                }
                if !(2..=MAX_BITS).contains(&self.bits) {
                    return err(format!("bits must lie in 2..={MAX_BITS}, got {}", self.bits));
                }
            }
        }
        if self.algorithms.contains(&Algorithm::Exhaustive)
            && self.element_counts().iter().any(|&l| l > MAX_EXHAUSTIVE_ELEMENTS)
        {
            return err(format!(
                "exhaustive search needs every L <= {MAX_EXHAUSTIVE_ELEMENTS}"
            ));
        }
        let s = &self.system;
        if !(s.power_dbm.is_finite() && s.noise_dbm.is_finite() && s.rician_db.is_finite()) {
            return err("system powers must be finite".into());
        }
        if !(0.0..=1.0).contains(&s.reflection) {
            return err(format!("reflection amplitude must lie in [0, 1], got {}", s.reflection));
        }
        if !(s.amplifier_efficiency > 0.0 && s.amplifier_efficiency <= 1.0) {
            return err("amplifier efficiency must lie in (0, 1]".into());
        }
        if !(s.static_mw > 0.0 && s.off_mw > 0.0 && s.on_mw >= s.off_mw) {
            return err("need static power > 0 and 0 < P_off <= P_on".into());
        }
        if self.mode == Mode::Discrete {
            let lowest = match self.axis {
                Axis::Bits => self.values.iter().fold(f64::INFINITY, |a, b| a.min(*b)) as u32,
                _ => self.bits,
            };
            if crate::worst_case::PowerModel::on_power_for_bits(lowest) < s.off_mw * 1e-3 {
                return err(format!("P_on({lowest} bits) is below P_off"));
            }
        }
        Ok(())
    }

    /// Trial parameters at one axis value.
    pub fn spec_at(&self, value: f64) -> TrialSpec {
        let mut spec = TrialSpec {
            elements: self.elements,
            mode: self.mode,
            bits: self.bits,
            tau: self.tau,
            nu: self.nu,
            power_dbm: self.system.power_dbm,
        };
        match self.axis {
            Axis::Elements => spec.elements = value as usize,
            Axis::Power => spec.power_dbm = value,
            Axis::Nu => spec.nu = value,
            Axis::Bits => spec.bits = value as u32,
            Axis::Tau => spec.tau = value,
        }
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_overrides_defaults() {
        let cfg = ExperimentConfig::from_toml_str(
            r#"
            axis = "tau"
            values = [0.0, 0.5]
            mode = "d"
            algorithms = ["crbm", "all_on"]
            [system]
            power_dbm = 20.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.axis, Axis::Tau);
        assert_eq!(cfg.mode, Mode::Discrete);
        assert_eq!(cfg.system.power_dbm, 20.0);
        assert_eq!(cfg.system.noise_dbm, -95.0);
        assert_eq!(cfg.trials, 100);
        cfg.validate().unwrap();
        assert_eq!(cfg.spec_at(0.5).tau, 0.5);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml_str("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml_str("axis = \"q\"").is_err());
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.tau = 1.5));
        assert!(bad(|c| c.trials = 0));
        assert!(bad(|c| c.values = vec![2.5]));
        assert!(bad(|c| c.algorithms = vec![Algorithm::Crbm]));
        assert!(bad(|c| {
            c.algorithms = vec![Algorithm::Exhaustive];
            c.values = vec![26.0];
        }));
        assert!(bad(|c| {
            c.mode = Mode::Discrete;
            c.algorithms = vec![Algorithm::AllOn];
            c.bits = 1;
        }));
        assert!(parse_values("1, 2,x").is_err());
        assert_eq!(parse_values("1, 2.5").unwrap(), vec![1.0, 2.5]);
    }
}
