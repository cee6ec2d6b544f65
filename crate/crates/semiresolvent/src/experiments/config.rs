use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::zoo::{lookup, ZooEntry};
use crate::error::Error;
use crate::model::{family_parameters, PotentialConfig};
use crate::numerics::{geometric_h, Method};
use crate::operators::centrifugal_coefficient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    ResolventSweep,
    RegionCheck,
    WidthSweep,
    WindowScan,
    IdentityCheck,
    Resonances,
    Carleman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionLaw {
    /// Depth `prefactor * exp(-rate / h)`.
    Exp,
    /// Depth `C h |ln h|`.
    Log,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown key `{key}` in section [{section}]")]
    UnknownKey { key: String, section: String },
    #[error("key `{key}` in section [{section}]: expected {expected}, got `{value}`")]
    TypeMismatch { key: String, section: String, expected: String, value: String },
    #[error("missing required key `{key}` in section [{section}]")]
    MissingRequired { key: String, section: String },
    #[error("key `{key}` in section [{section}]: {detail}")]
    Invalid { key: String, section: String, detail: String },
    #[error("line {line}: {detail}")]
    Syntax { line: usize, detail: String },
}

impl From<ConfigError> for Error {
    fn from(e: ConfigError) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

/// Fully resolved experiment configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    /// Zoo id (`M1`..`M5`) or a family name.
    pub model: String,
    pub potential: PotentialConfig,
    pub d: usize,
    pub ell: usize,
    /// Reference energy `E0`.
    pub energy: f64,
    pub eps0: f64,
    /// Energy window (`J`, or `I_eps0 = [E0 - eps0, E0 + eps0]`).
    pub e_window: (f64, f64),
    /// Energies sampled across the window for a supremum (1: `E0` only).
    pub energies: usize,
    pub s: f64,
    pub h_list: Vec<f64>,
    /// Cutoff radius `R0` of the truncated norm.
    pub truncation: f64,
    pub method: Method,
    pub cross_check: bool,
    pub seed: u64,
    /// Mesh is `mesh_factor * h / sqrt(kinetic range)`, capped by `mesh_max`.
    pub mesh_factor: f64,
    pub mesh_max: f64,
    /// Outgoing attenuation `exp(-attenuation)` across the scaled layer.
    pub attenuation: f64,
    pub r_cap: f64,
    pub onset: f64,
    pub theta: f64,
    pub theta_alt: f64,
    pub theta_scale: f64,
    pub law: RegionLaw,
    pub c: f64,
    pub exp_rate: f64,
    pub exp_prefactor: f64,
    pub eta: f64,
    pub depth: Option<f64>,
    pub diagnostic: bool,
    pub test_functions: usize,
    pub budget: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Str,
    Uint,
    Float,
    OptFloat,
    FloatList,
    Pair,
    Bool,
    Choice(&'static [&'static str]),
}

impl Kind {
    fn expected(self) -> String {
        match self {
            Kind::Str => "a string".into(),
            Kind::Uint => "a nonnegative integer".into(),
            Kind::Float => "a number".into(),
            Kind::OptFloat => "a number or `none`".into(),
            Kind::FloatList => "a comma-separated list of numbers".into(),
            Kind::Pair => "two comma-separated numbers".into(),
            Kind::Bool => "`true` or `false`".into(),
            Kind::Choice(c) => format!("one of {}", c.join(", ")),
        }
    }
}

const SCHEMA: &[(&str, &str, Kind)] = &[
    ("model", "model", Kind::Str),
    ("model", "d", Kind::Uint),
    ("model", "ell", Kind::Uint),
    ("energy", "energy", Kind::Float),
    ("energy", "eps0", Kind::Float),
    ("energy", "e_window", Kind::Pair),
    ("energy", "energies", Kind::Uint),
    ("energy", "s", Kind::Float),
    ("sweep", "h_list", Kind::FloatList),
    ("sweep", "truncation", Kind::Float),
    ("sweep", "method", Kind::Choice(&["absorption", "distortion"])),
    ("sweep", "cross_check", Kind::Bool),
    ("sweep", "seed", Kind::Uint),
    ("grid", "mesh_factor", Kind::Float),
    ("grid", "mesh_max", Kind::Float),
    ("grid", "attenuation", Kind::Float),
    ("grid", "r_cap", Kind::Float),
    ("grid", "onset", Kind::Float),
    ("grid", "theta", Kind::Float),
    ("grid", "theta_alt", Kind::Float),
    ("grid", "theta_scale", Kind::Float),
    ("region", "law", Kind::Choice(&["exp", "log"])),
    ("region", "c", Kind::Float),
    ("region", "exp_rate", Kind::Float),
    ("region", "exp_prefactor", Kind::Float),
    ("region", "eta", Kind::Float),
    ("region", "depth", Kind::OptFloat),
    ("region", "diagnostic", Kind::Bool),
    ("carleman", "test_functions", Kind::Uint),
    ("carleman", "budget", Kind::Uint),
];

const REQUIRED: &[(&str, &str)] = &[("model", "model"), ("energy", "energy"), ("sweep", "h_list")];

enum Value {
    Str(String),
    Uint(u64),
    Float(f64),
    OptFloat(Option<f64>),
    List(Vec<f64>),
    Pair(f64, f64),
    Bool(bool),
}

fn parse_value(section: &str, key: &str, kind: Kind, raw: &str) -> Result<Value, ConfigError> {
    let bad = || ConfigError::TypeMismatch {
        key: key.into(),
        section: section.into(),
        expected: kind.expected(),
        value: raw.into(),
    };
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite());
    let list = || -> Option<Vec<f64>> { raw.split(',').map(num).collect() };
    Ok(match kind {
        Kind::Str => {
            if raw.is_empty() {
                return Err(bad());
            }
            Value::Str(raw.into())
        }
        Kind::Uint => Value::Uint(raw.parse().map_err(|_| bad())?),
        Kind::Float => Value::Float(num(raw).ok_or_else(bad)?),
        Kind::OptFloat => {
            if raw.eq_ignore_ascii_case("none") {
                Value::OptFloat(None)
            } else {
                Value::OptFloat(Some(num(raw).ok_or_else(bad)?))
            }
        }
        Kind::FloatList => Value::List(list().filter(|l| !l.is_empty()).ok_or_else(bad)?),
        Kind::Pair => match list().as_deref() {
            Some([a, b]) => Value::Pair(*a, *b),
            _ => return Err(bad()),
        },
        Kind::Bool => match raw {
            "true" => Value::Bool(true),
            "false" => Value::Bool(false),
            _ => return Err(bad()),
        },
        Kind::Choice(options) => {
            if !options.contains(&raw) {
                return Err(bad());
            }
            Value::Str(raw.into())
        }
    })
}

/// One `key = value` assignment with its (possibly implicit) section.
#[derive(Clone, Debug)]
struct Assignment {
    section: Option<String>,
    key: String,
    value: String,
}

fn lex(text: &str) -> Result<Vec<Assignment>, ConfigError> {
    let mut out = Vec::new();
    let mut section: Option<String> = None;
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax { line: k + 1, detail: "unterminated section header".into() })?
                .trim();
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line: k + 1, detail: format!("expected `key = value`, got `{line}`") })?;
        out.push(Assignment { section: section.clone(), key: key.trim().into(), value: value.trim().into() });
    }
    Ok(out)
}

fn lex_override(s: &str) -> Result<Assignment, ConfigError> {
    let (lhs, value) = s
        .split_once('=')
        .ok_or_else(|| ConfigError::Syntax { line: 0, detail: format!("override `{s}` is not `key=value`") })?;
    let lhs = lhs.trim();
    let (section, key) = match lhs.split_once('.') {
        Some((sec, key)) => (Some(sec.trim().to_string()), key.trim().to_string()),
        None => (None, lhs.to_string()),
    };
    Ok(Assignment { section, key, value: value.trim().into() })
}

impl SweepConfig {
    /// Defaults for a zoo model and the experiment it feeds.
    pub fn preset(model: &str, experiment: Experiment) -> crate::Result<Self> {
        match lookup(model) {
            Ok(m) => Ok(Self::from_zoo(m, experiment)),
            Err(_) if family_parameters(model).is_some() => Ok(Self::generic(model, PotentialConfig::new(model)?)),
            Err(e) => Err(e),
        }
    }

    fn generic(model: &str, potential: PotentialConfig) -> Self {
        let energy = 1.0;
        Self {
            model: model.to_string(),
            potential,
            d: 1,
            ell: 0,
            energy,
            eps0: 0.1 * energy,
            e_window: (0.9 * energy, 1.1 * energy),
            energies: 1,
            s: 1.0,
            h_list: geometric_h(0.4, 0.025, 8),
            truncation: 3.0,
            method: Method::Distortion,
            cross_check: false,
            seed: 0,
            mesh_factor: 0.1,
            mesh_max: 0.05,
            attenuation: 30.0,
            r_cap: 400.0,
            onset: 1.0,
            theta: 0.2,
            theta_alt: 0.15,
            theta_scale: 1.0,
            law: RegionLaw::Log,
            c: 1.0,
            exp_rate: 1.0,
            exp_prefactor: 1.0,
            eta: 1.0,
            depth: None,
            diagnostic: false,
            test_functions: 100,
            budget: 200,
        }
    }

    fn from_zoo(m: &ZooEntry, experiment: Experiment) -> Self {
        let mut c = Self::generic(m.id, m.potential_config());
        c.energy = m.energy;
        c.eps0 = 0.1 * m.energy;
        c.e_window = (m.energy - c.eps0, m.energy + c.eps0);
        if experiment == Experiment::ResolventSweep {
            c.onset = 20.0;
        }
        match m.id {
            "M3" => {
                c.eps0 = 0.11;
                c.e_window = (0.08, 0.3);
                c.energies = 9;
                c.h_list = geometric_h(0.1, 0.025, 8);
                c.truncation = 2.5;
                c.eta = 0.05;
                c.onset = if experiment == Experiment::ResolventSweep { 6.0 } else { 3.0 };
                match experiment {
                    Experiment::WidthSweep => {
                        c.theta = 0.10;
                        c.theta_alt = 0.15;
                    }
                    Experiment::RegionCheck => c.diagnostic = true,
                    _ => {}
                }
            }
            "M5" => c.onset = 6.0,
            _ => {}
        }
        c
    }

    /// Parses a config file; `model`, `energy` and `h_list` are required.
    pub fn parse(text: &str, overrides: &[String], experiment: Experiment) -> Result<Self, ConfigError> {
        let mut list = lex(text)?;
        for o in overrides {
            list.push(lex_override(o)?);
        }
        Self::resolve(list, experiment, true)
    }

    /// Starts from the preset of `model` and applies `key=value` overrides.
    pub fn from_overrides(model: &str, overrides: &[String], experiment: Experiment) -> Result<Self, ConfigError> {
        let mut list = vec![Assignment { section: None, key: "model".into(), value: model.into() }];
        for o in overrides {
            list.push(lex_override(o)?);
        }
        Self::resolve(list, experiment, false)
    }

    fn resolve(list: Vec<Assignment>, experiment: Experiment, strict: bool) -> Result<Self, ConfigError> {
        // Resolve every section first so unknown keys are reported before anything else.
        let mut resolved: Vec<(String, String, String)> = Vec::new();
        for a in list {
            let section = match &a.section {
                Some(s) if s == "potential" => s.clone(),
                Some(s) => {
                    if !SCHEMA.iter().any(|(sec, _, _)| sec == s) {
                        return Err(ConfigError::UnknownKey { key: a.key, section: s.clone() });
                    }
                    if !SCHEMA.iter().any(|(sec, k, _)| sec == s && *k == a.key) {
                        return Err(ConfigError::UnknownKey { key: a.key, section: s.clone() });
                    }
                    s.clone()
                }
                None => match SCHEMA.iter().find(|(_, k, _)| *k == a.key) {
                    Some((sec, _, _)) => sec.to_string(),
                    None => return Err(ConfigError::UnknownKey { key: a.key, section: "root".into() }),
                },
            };
            resolved.push((section, a.key, a.value));
        }
        let seen = |sec: &str, key: &str| resolved.iter().any(|(s, k, _)| s == sec && k == key);
        if strict {
            for (sec, key) in REQUIRED {
                if !seen(sec, key) {
                    return Err(ConfigError::MissingRequired { key: key.to_string(), section: sec.to_string() });
                }
            }
        }
        let model = resolved
            .iter()
            .rev()
            .find(|(s, k, _)| s == "model" && k == "model")
            .map(|(_, _, v)| v.clone())
            .ok_or_else(|| ConfigError::MissingRequired { key: "model".into(), section: "model".into() })?;
        let mut cfg = Self::preset(&model, experiment).map_err(|e| ConfigError::Invalid {
            key: "model".into(),
            section: "model".into(),
            detail: e.to_string(),
        })?;
        for (sec, key, raw) in &resolved {
            if sec == "potential" {
                let v = raw.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| ConfigError::TypeMismatch {
                    key: key.clone(),
                    section: sec.clone(),
                    expected: "a number".into(),
                    value: raw.clone(),
                })?;
                cfg.potential
                    .set_param(key, v)
                    .map_err(|_| ConfigError::UnknownKey { key: key.clone(), section: sec.clone() })?;
                continue;
            }
            let kind = SCHEMA.iter().find(|(s, k, _)| s == sec && k == key).map(|e| e.2).expect("schema key");
            let value = parse_value(sec, key, kind, raw)?;
            cfg.assign(sec, key, value)?;
        }
        if (seen("energy", "energy") || seen("energy", "eps0")) && !seen("energy", "e_window") {
            if !seen("energy", "eps0") {
                cfg.eps0 = 0.1 * cfg.energy.abs();
            }
            cfg.e_window = (cfg.energy - cfg.eps0, cfg.energy + cfg.eps0);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn assign(&mut self, section: &str, key: &str, value: Value) -> Result<(), ConfigError> {
        let invalid = |detail: &str| ConfigError::Invalid { key: key.into(), section: section.into(), detail: detail.into() };
        match (key, value) {
            ("model", Value::Str(s)) => self.model = s,
            ("d", Value::Uint(x)) => self.d = x as usize,
            ("ell", Value::Uint(x)) => self.ell = x as usize,
            ("energy", Value::Float(x)) => self.energy = x,
            ("eps0", Value::Float(x)) => self.eps0 = x,
            ("e_window", Value::Pair(a, b)) => self.e_window = (a, b),
            ("energies", Value::Uint(x)) => self.energies = x as usize,
            ("s", Value::Float(x)) => self.s = x,
            ("h_list", Value::List(l)) => self.h_list = l,
            ("truncation", Value::Float(x)) => self.truncation = x,
            ("method", Value::Str(s)) => {
                self.method = if s == "absorption" { Method::Absorption } else { Method::Distortion }
            }
            ("cross_check", Value::Bool(b)) => self.cross_check = b,
            ("seed", Value::Uint(x)) => self.seed = x,
            ("mesh_factor", Value::Float(x)) => self.mesh_factor = x,
            ("mesh_max", Value::Float(x)) => self.mesh_max = x,
            ("attenuation", Value::Float(x)) => self.attenuation = x,
            ("r_cap", Value::Float(x)) => self.r_cap = x,
            ("onset", Value::Float(x)) => self.onset = x,
            ("theta", Value::Float(x)) => self.theta = x,
            ("theta_alt", Value::Float(x)) => self.theta_alt = x,
            ("theta_scale", Value::Float(x)) => self.theta_scale = x,
            ("law", Value::Str(s)) => self.law = if s == "exp" { RegionLaw::Exp } else { RegionLaw::Log },
            ("c", Value::Float(x)) => self.c = x,
            ("exp_rate", Value::Float(x)) => self.exp_rate = x,
            ("exp_prefactor", Value::Float(x)) => self.exp_prefactor = x,
            ("eta", Value::Float(x)) => self.eta = x,
            ("depth", Value::OptFloat(x)) => self.depth = x,
            ("diagnostic", Value::Bool(b)) => self.diagnostic = b,
            ("test_functions", Value::Uint(x)) => self.test_functions = x as usize,
            ("budget", Value::Uint(x)) => self.budget = x as usize,
            _ => return Err(invalid("value does not fit the key")),
        }
        Ok(())
    }

    /// Checks every field; errors name the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let inv = |section: &str, key: &str, detail: String| ConfigError::Invalid {
            key: key.into(),
            section: section.into(),
            detail,
        };
        centrifugal_coefficient::<f64>(self.d, self.ell).map_err(|e| inv("model", "d", e.to_string()))?;
        self.potential.build::<f64>().map_err(|e| inv("potential", "family", e.to_string()))?;
        if !(self.s > 0.5) {
            return Err(inv("energy", "s", format!("weighted norm requires s > 1/2 (got {})", self.s)));
        }
        if !(self.e_window.0 <= self.e_window.1) {
            return Err(inv("energy", "e_window", "needs E- <= E+".into()));
        }
        if self.energies == 0 {
            return Err(inv("energy", "energies", "needs at least one energy".into()));
        }
        if self.h_list.is_empty() || self.h_list.iter().any(|&h| !(h > 0.0)) {
            return Err(inv("sweep", "h_list", "h values must be positive".into()));
        }
        if self.h_list.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(inv("sweep", "h_list", "h list must be strictly decreasing".into()));
        }
        let positive: [(&str, &str, f64); 9] = [
            ("grid", "mesh_factor", self.mesh_factor),
            ("grid", "mesh_max", self.mesh_max),
            ("grid", "attenuation", self.attenuation),
            ("grid", "r_cap", self.r_cap),
            ("grid", "theta_scale", self.theta_scale),
            ("region", "c", self.c),
            ("region", "exp_rate", self.exp_rate),
            ("region", "exp_prefactor", self.exp_prefactor),
            ("region", "eta", self.eta),
        ];
        for (sec, key, v) in positive {
            if !(v > 0.0) {
                return Err(inv(sec, key, "must be positive".into()));
            }
        }
        if !(self.truncation >= 0.0) {
            return Err(inv("sweep", "truncation", "must be nonnegative".into()));
        }
        if !(self.onset >= 0.0) {
            return Err(inv("grid", "onset", "must be nonnegative".into()));
        }
        for (key, t) in [("theta", self.theta), ("theta_alt", self.theta_alt)] {
            if !(0.0..std::f64::consts::FRAC_PI_4).contains(&t) {
                return Err(inv("grid", key, "scaling angle must lie in [0, pi/4)".into()));
            }
        }
        if let Some(d) = self.depth {
            if !(d > 0.0) {
                return Err(inv("region", "depth", "must be positive".into()));
            }
        }
        Ok(())
    }

    /// `E0` alone, or `energies` points spread across the window.
    pub fn energy_samples(&self) -> Vec<f64> {
        let (lo, hi) = self.e_window;
        if self.energies <= 1 || lo == hi {
            return vec![self.energy];
        }
        (0..self.energies).map(|k| lo + (hi - lo) * k as f64 / (self.energies - 1) as f64).collect()
    }

    /// Resolved configuration in the file dialect; parsing it gives `self` back.
    pub fn echo(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let mut section = |name: &str, rows: Vec<(&str, String)>| {
            let _ = writeln!(out, "[{name}]");
            for (k, v) in rows {
                let _ = writeln!(out, "{k} = {v}");
            }
            out.push('\n');
        };
        section("model", vec![("model", self.model.clone()), ("d", self.d.to_string()), ("ell", self.ell.to_string())]);
        section("potential", self.potential.params.iter().map(|(k, v)| (k.as_str(), v.to_string())).collect());
        section(
            "energy",
            vec![
                ("energy", self.energy.to_string()),
                ("eps0", self.eps0.to_string()),
                ("e_window", list(&[self.e_window.0, self.e_window.1])),
                ("energies", self.energies.to_string()),
                ("s", self.s.to_string()),
            ],
        );
        section(
            "sweep",
            vec![
                ("h_list", list(&self.h_list)),
                ("truncation", self.truncation.to_string()),
                ("method", if self.method == Method::Absorption { "absorption" } else { "distortion" }.into()),
                ("cross_check", self.cross_check.to_string()),
                ("seed", self.seed.to_string()),
            ],
        );
        section(
            "grid",
            vec![
                ("mesh_factor", self.mesh_factor.to_string()),
                ("mesh_max", self.mesh_max.to_string()),
                ("attenuation", self.attenuation.to_string()),
                ("r_cap", self.r_cap.to_string()),
                ("onset", self.onset.to_string()),
                ("theta", self.theta.to_string()),
                ("theta_alt", self.theta_alt.to_string()),
                ("theta_scale", self.theta_scale.to_string()),
            ],
        );
        section(
            "region",
            vec![
                ("law", if self.law == RegionLaw::Exp { "exp" } else { "log" }.into()),
                ("c", self.c.to_string()),
                ("exp_rate", self.exp_rate.to_string()),
                ("exp_prefactor", self.exp_prefactor.to_string()),
                ("eta", self.eta.to_string()),
                ("depth", self.depth.map_or("none".into(), |d| d.to_string())),
                ("diagnostic", self.diagnostic.to_string()),
            ],
        );
        section(
            "carleman",
            vec![("test_functions", self.test_functions.to_string()), ("budget", self.budget.to_string())],
        );
        out.truncate(out.trim_end().len());
        out.push('\n');
        out
    }
}
