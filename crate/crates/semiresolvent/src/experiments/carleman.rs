use serde::Serialize;

use super::config::SweepConfig;
use super::persist::{ExperimentRecord, Series};
use super::setup::build_potential;
use super::sweep::NamedFit;
use crate::carleman::{
    carleman_inequality_test, gaussian_suite, optimize_weight, InequalityReport, Quadrature, SearchBudget,
    WeightSearch,
};
use crate::error::Result;
use crate::model::uniform_radii;
use crate::numerics::FitModel;

/// Outer radius of the certificate grid and of the test-function quadrature.
pub const CARLEMAN_R_MAX: f64 = 30.0;
const CERTIFICATE_RADII: usize = 1201;

/// Weight search at the configured energy with the h list as `h_set`.
pub fn weight_search(cfg: &SweepConfig) -> Result<WeightSearch<f64>> {
    cfg.validate()?;
    let v = build_potential(cfg)?;
    let radii = uniform_radii(CARLEMAN_R_MAX, CERTIFICATE_RADII);
    let budget = SearchBudget { candidates: cfg.budget, seed: cfg.seed, ..SearchBudget::default() };
    optimize_weight(&v, cfg.energy, cfg.s, &cfg.h_list, &radii, &budget)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalitySweep {
    pub points: Vec<InequalityReport>,
    /// Power fit of `C_hat` against `h`.
    pub fit: NamedFit,
    /// Slope of `log C_hat` against `log(1/h)`.
    pub growth: f64,
}

/// Empirical Carleman constant over the h list with the optimized weight.
pub fn carleman_inequality_sweep(cfg: &SweepConfig, search: &WeightSearch<f64>) -> Result<InequalitySweep> {
    let v = build_potential(cfg)?;
    let suite = gaussian_suite::<f64>(cfg.test_functions, v.channels(), CARLEMAN_R_MAX, cfg.seed);
    let h_min = cfg.h_list.iter().copied().fold(f64::INFINITY, f64::min);
    // e^{2 phi / h} changes on the scale h / (2 phi'); ten nodes per scale.
    let slope = search.weight.shape().slope;
    let intervals = ((CARLEMAN_R_MAX * 10.0 * (1.0 + 2.0 * slope) / h_min).ceil() as usize).max(4000);
    let quad = Quadrature::uniform(CARLEMAN_R_MAX, intervals + intervals % 2)?;
    let points = cfg
        .h_list
        .iter()
        .map(|&h| carleman_inequality_test(&v, &search.weight, cfg.energy, 0.0, cfg.s, h, cfg.d, cfg.ell, &suite, &quad))
        .collect::<Result<Vec<_>>>()?;
    let data: Vec<(f64, f64)> = points.iter().map(|p| (p.h, p.c_hat)).collect();
    let fit = NamedFit::new("c_hat_power", &data, FitModel::Power);
    let growth = fit.fit.as_ref().map_or(f64::NAN, |f| -f.b);
    Ok(InequalitySweep { points, fit, growth })
}

pub fn carleman_record(cfg: &SweepConfig, search: &WeightSearch<f64>, sweep: Option<&InequalitySweep>) -> ExperimentRecord {
    let mut rec = ExperimentRecord::new("carleman", Some(cfg));
    rec.certificates.push(serde_json::to_value(&search.certificate).unwrap_or_default());
    if let Some(s) = sweep {
        let mut series = Series::new("constant", &["h", "c_hat"]);
        for p in &s.points {
            series.push(vec![p.h, p.c_hat]);
        }
        rec.series.push(series);
        rec.fits.push(s.fit.clone());
    }
    rec.details = serde_json::json!({
        "weight": search.weight.shape(),
        "evaluated": search.evaluated,
        "growth": sweep.map(|s| s.growth),
    });
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Experiment;

    #[test]
    fn free_model_search_and_small_sweep() {
        let mut cfg = SweepConfig::preset("M1", Experiment::Carleman).unwrap();
        cfg.h_list = vec![0.4, 0.2, 0.1];
        cfg.test_functions = 5;
        cfg.budget = 10;
        let s = weight_search(&cfg).unwrap();
        assert_eq!(s.certificate.margin, 1.0);
        let sweep = carleman_inequality_sweep(&cfg, &s).unwrap();
        assert_eq!(sweep.points.len(), 3);
        assert!(sweep.points.iter().all(|p| p.c_hat.is_finite() && p.c_hat > 0.0));
    }
}
