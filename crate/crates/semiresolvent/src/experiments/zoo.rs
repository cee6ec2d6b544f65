use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{MatrixPotential, PotentialConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Trapping,
    Nontrapping,
}

/// A pinned model with its reference energy and expected behaviour.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZooEntry {
    pub id: &'static str,
    pub family: &'static str,
    /// Parameter overrides on top of the family defaults.
    pub params: &'static [(&'static str, f64)],
    pub regime: Regime,
    pub energy: f64,
    /// Whether the escape certificate passes on `[0.9 E, 1.1 E]`.
    pub certificate: bool,
    pub summary: &'static str,
}

impl ZooEntry {
    pub fn potential_config(&self) -> PotentialConfig {
        let mut p = PotentialConfig::new(self.family).expect("zoo family exists");
        for (k, v) in self.params {
            p.set_param(k, *v).expect("zoo parameter exists");
        }
        p
    }

    pub fn potential(&self) -> MatrixPotential<f64> {
        self.potential_config().build().expect("zoo potential builds")
    }
}

pub const ZOO: &[ZooEntry] = &[
    ZooEntry {
        id: "M1",
        family: "free",
        params: &[],
        regime: Regime::Nontrapping,
        energy: 1.0,
        certificate: true,
        summary: "free scalar operator",
    },
    ZooEntry {
        id: "M2",
        family: "rational",
        params: &[("amplitude", 0.4), ("rho", 2.0), ("rho0", 1.0)],
        regime: Regime::Nontrapping,
        energy: 1.0,
        certificate: true,
        summary: "scalar repulsive tail 0.4 (1 + r^2/4)^-1",
    },
    ZooEntry {
        id: "M3",
        family: "volcano",
        params: &[],
        regime: Regime::Trapping,
        energy: 0.19,
        certificate: false,
        summary: "scalar well behind a Gaussian barrier; shape resonance near 0.12",
    },
    ZooEntry {
        id: "M4",
        family: "coupled_gaussian",
        params: &[],
        regime: Regime::Nontrapping,
        energy: 2.0,
        certificate: true,
        summary: "two channels, thresholds 0 and 1, repulsive Gaussian with Gaussian coupling",
    },
    ZooEntry {
        id: "M5",
        family: "avoided_crossing",
        params: &[],
        regime: Regime::Nontrapping,
        energy: 0.5,
        certificate: true,
        summary: "two channels whose diabatic levels cross at r = 3, split by delta",
    },
];

pub fn lookup(id: &str) -> Result<&'static ZooEntry> {
    ZOO.iter()
        .find(|m| m.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::invalid(format!("unknown model `{id}` (known: M1..M5)")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{escape_certificate, uniform_radii};

    #[test]
    fn documented_certificate_status_holds() {
        for m in ZOO {
            let v = m.potential();
            let c = escape_certificate(&v, (0.9 * m.energy, 1.1 * m.energy), &uniform_radii(30.0, 1201), 9)
                .unwrap();
            assert_eq!(c.pass, m.certificate, "{} margin {}", m.id, c.margin);
        }
    }

    #[test]
    fn energies_above_thresholds() {
        for m in ZOO {
            assert!(m.energy > m.potential().v_inf_norm(), "{}", m.id);
        }
        assert!(lookup("m3").is_ok() && lookup("M9").is_err());
    }
}
