use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::potential::{MatrixPotential, Profile};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Declarative potential record: family name plus numeric parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialConfig {
    pub family: String,
    pub params: BTreeMap<String, f64>,
}

/// Parameter names and defaults of a family.
pub fn family_parameters(family: &str) -> Option<&'static [(&'static str, f64)]> {
    let p: &'static [(&'static str, f64)] = match family {
        "free" => &[],
        "constant" => &[("channels", 1.0), ("lambda1", 0.0), ("lambda2", 1.0), ("offdiag", 0.0)],
        "gaussian" => &[("amplitude", -1.0), ("center", 0.0), ("width", 1.0), ("rho0", 1.0)],
        "exponential" => &[("amplitude", 1.0), ("rate", 1.0), ("rho0", 1.0)],
        "algebraic" => &[("amplitude", 1.0), ("power", 1.0), ("rho0", 1.0)],
        "rational" => &[("amplitude", 0.4), ("rho", 2.0), ("rho0", 1.0)],
        "volcano" => &[
            ("barrier", 0.5),
            ("barrier_width", 1.2),
            ("well", 0.45),
            ("well_width", 0.7),
            ("rho0", 1.0),
        ],
        "coupled_gaussian" => &[
            ("lambda1", 0.0),
            ("lambda2", 1.0),
            ("diag1", 0.2),
            ("diag2", 0.2),
            ("coupling", 0.1),
            ("width", 1.0),
            ("rho0", 1.0),
        ],
        "avoided_crossing" => &[
            ("alpha", 0.1),
            ("delta", 0.02),
            ("center", 3.0),
            ("width", 1.0),
            ("rho0", 0.5),
        ],
        "square_well" => &[("depth", 5.0), ("radius", 1.0), ("rho0", 1.0)],
        _ => return None,
    };
    Some(p)
}

pub const FAMILIES: &[&str] = &[
    "free",
    "constant",
    "gaussian",
    "exponential",
    "algebraic",
    "rational",
    "volcano",
    "coupled_gaussian",
    "avoided_crossing",
    "square_well",
];

impl PotentialConfig {
    /// Family with all parameters at their defaults.
    pub fn new(family: &str) -> Result<Self> {
        let defaults = family_parameters(family)
            .ok_or_else(|| Error::invalid(format!("unknown potential family `{family}`")))?;
        Ok(Self {
            family: family.to_string(),
            params: defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        })
    }

    /// Overrides one parameter; unknown names are rejected.
    pub fn set(mut self, key: &str, value: f64) -> Result<Self> {
        self.set_param(key, value)?;
        Ok(self)
    }

    pub fn set_param(&mut self, key: &str, value: f64) -> Result<()> {
        let defaults = family_parameters(&self.family)
            .ok_or_else(|| Error::invalid(format!("unknown potential family `{}`", self.family)))?;
        if !defaults.iter().any(|(k, _)| *k == key) {
            return Err(Error::invalid(format!(
                "family `{}` has no parameter `{key}`",
                self.family
            )));
        }
        self.params.insert(key.to_string(), value);
        Ok(())
    }

    fn get(&self, key: &str) -> f64 {
        self.params[key]
    }

    pub fn build<T: Real>(&self) -> Result<MatrixPotential<T>> {
        let defaults = family_parameters(&self.family)
            .ok_or_else(|| Error::invalid(format!("unknown potential family `{}`", self.family)))?;
        for key in self.params.keys() {
            if !defaults.iter().any(|(k, _)| k == key) {
                return Err(Error::invalid(format!(
                    "family `{}` has no parameter `{key}`",
                    self.family
                )));
            }
        }
        let mut full = self.clone();
        for (k, v) in defaults {
            full.params.entry(k.to_string()).or_insert(*v);
        }
        if full.params.values().any(|v| !v.is_finite()) {
            return Err(Error::invalid("potential parameters must be finite"));
        }
        let c = |x: f64| T::lit(x);
        let p = |k: &str| c(full.get(k));
        let positive = |k: &str| -> Result<T> {
            let v = full.get(k);
            if v > 0.0 {
                Ok(c(v))
            } else {
                Err(Error::invalid(format!("parameter `{k}` must be positive")))
            }
        };
        let rho0 = if full.params.contains_key("rho0") { positive("rho0")? } else { T::one() };
        let v = match full.family.as_str() {
            "free" => MatrixPotential::constant(1, vec![T::zero()], T::one())?,
            "constant" => match full.get("channels") as usize {
                1 => MatrixPotential::constant(1, vec![p("lambda1")], T::one())?,
                2 => MatrixPotential::constant(
                    2,
                    vec![p("lambda1"), p("offdiag"), p("offdiag"), p("lambda2")],
                    T::one(),
                )?,
                _ => return Err(Error::invalid("`channels` must be 1 or 2")),
            },
            "gaussian" => MatrixPotential::constant(1, vec![T::zero()], rho0)?.with_term(
                vec![p("amplitude")],
                Profile::Gaussian { center: p("center"), width: positive("width")? },
            )?,
            "exponential" => MatrixPotential::constant(1, vec![T::zero()], rho0)?
                .with_term(vec![p("amplitude")], Profile::Exponential { rate: positive("rate")? })?,
            "algebraic" => MatrixPotential::constant(1, vec![T::zero()], rho0)?.with_term(
                vec![p("amplitude")],
                Profile::Algebraic { power: positive("power")? },
            )?,
            "rational" => MatrixPotential::constant(1, vec![T::zero()], rho0)?
                .with_term(vec![p("amplitude")], Profile::Rational { rho: positive("rho")? })?,
            "volcano" => MatrixPotential::constant(1, vec![T::zero()], rho0)?
                .with_term(
                    vec![p("barrier")],
                    Profile::Gaussian { center: T::zero(), width: positive("barrier_width")? },
                )?
                .with_term(
                    vec![-p("well")],
                    Profile::Gaussian { center: T::zero(), width: positive("well_width")? },
                )?,
            "coupled_gaussian" => {
                let cpl = p("coupling");
                MatrixPotential::constant(
                    2,
                    vec![p("lambda1"), T::zero(), T::zero(), p("lambda2")],
                    rho0,
                )?
                .with_term(
                    vec![p("diag1"), cpl, cpl, p("diag2")],
                    Profile::Gaussian { center: T::zero(), width: positive("width")? },
                )?
            }
            "avoided_crossing" => {
                let a = p("alpha");
                let d = p("delta");
                MatrixPotential::constant(2, vec![a, d, d, -a], rho0)?.with_term(
                    vec![a, T::zero(), T::zero(), -a],
                    Profile::TanhStep { center: p("center"), width: positive("width")? },
                )?
            }
            "square_well" => MatrixPotential::constant(1, vec![T::zero()], rho0)?.with_term(
                vec![-positive("depth")?],
                Profile::Step { radius: positive("radius")? },
            )?,
            other => return Err(Error::invalid(format!("unknown potential family `{other}`"))),
        };
        Ok(v.with_label(full.family.clone(), full.params.into_iter().collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_builds_with_defaults() {
        for f in FAMILIES {
            let v = PotentialConfig::new(f).unwrap().build::<f64>().unwrap();
            assert_eq!(v.label(), *f);
        }
    }

    #[test]
    fn unknown_parameter_rejected() {
        assert!(PotentialConfig::new("gaussian").unwrap().set("depht", 1.0).is_err());
        assert!(PotentialConfig::new("nope").is_err());
    }

    #[test]
    fn avoided_crossing_limit_matrix() {
        let v = PotentialConfig::new("avoided_crossing")
            .unwrap()
            .set("alpha", 1.0)
            .unwrap()
            .set("delta", 0.1)
            .unwrap()
            .set("center", 5.0)
            .unwrap()
            .build::<f64>()
            .unwrap();
        let m = v.at(5.0);
        assert!(m[(0, 0)].re.abs() < 1e-15);
        assert_eq!(m[(0, 1)].re, 0.1);
    }
}
