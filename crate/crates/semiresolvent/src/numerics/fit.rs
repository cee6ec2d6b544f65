use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `y = a h^b`
    Power,
    /// `log y = a + S / h`
    ExpInv,
    /// `y = a h |ln h|`
    LogWindow,
}

impl FitModel {
    pub fn name(self) -> &'static str {
        match self {
            FitModel::Power => "power",
            FitModel::ExpInv => "exp_inv",
            FitModel::LogWindow => "log_window",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub model: FitModel,
    /// Prefactor (`a`; the intercept for `exp_inv`).
    pub a: f64,
    /// Exponent `b` (power), rate `S` (exp_inv); unused for `log_window`.
    pub b: f64,
    pub r2: f64,
    /// `(h, y)` sorted by `h` descending.
    pub data: Vec<(f64, f64)>,
}

/// Least squares in the model's linearizing coordinates.
pub fn fit_scaling(series: &[(f64, f64)], model: FitModel) -> Result<FitReport> {
    let degenerate = |detail: &str| Error::DegenerateFit { model: model.name().into(), detail: detail.into() };
    if series.len() < 4 {
        return Err(degenerate("need at least 4 points"));
    }
    if series.iter().any(|&(h, y)| !(h > 0.0) || !(y > 0.0) || !h.is_finite() || !y.is_finite()) {
        return Err(degenerate("need h > 0 and y > 0"));
    }
    let mut data = series.to_vec();
    data.sort_by(|p, q| q.0.total_cmp(&p.0));
    match model {
        FitModel::Power | FitModel::ExpInv => {
            let xs: Vec<f64> = data
                .iter()
                .map(|&(h, _)| if model == FitModel::Power { h.ln() } else { 1.0 / h })
                .collect();
            let ys: Vec<f64> = data.iter().map(|&(_, y)| y.ln()).collect();
            let (a, b, r2) = linear(&xs, &ys).ok_or_else(|| degenerate("zero variance in regressor"))?;
            let a = if model == FitModel::Power { a.exp() } else { a };
            Ok(FitReport { model, a, b, r2, data })
        }
        FitModel::LogWindow => {
            let ratios: Vec<f64> = data
                .iter()
                .map(|&(h, y)| {
                    let g = h * h.ln().abs();
                    y / g
                })
                .collect();
            if ratios.iter().any(|r| !r.is_finite()) {
                return Err(degenerate("h |ln h| vanishes (h = 1)"));
            }
            let a = ratios.iter().sum::<f64>() / ratios.len() as f64;
            // Goodness of y against the fitted a h |ln h|.
            let ys: Vec<f64> = data.iter().map(|&(_, y)| y).collect();
            let mean = ys.iter().sum::<f64>() / ys.len() as f64;
            let sst: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
            let sse: f64 = data.iter().map(|&(h, y)| (y - a * h * h.ln().abs()).powi(2)).sum();
            let r2 = if sst > 0.0 { (1.0 - sse / sst).clamp(0.0, 1.0) } else if sse == 0.0 { 1.0 } else { 0.0 };
            Ok(FitReport { model, a, b: 0.0, r2, data })
        }
    }
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, R^2)`.
fn linear(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 1e-300) || sxx <= 1e-24 * xs.iter().map(|x| x * x).sum::<f64>() {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    Some((a, b, r2))
}

/// Geometric h list `h_max -> h_min` with `count` points.
pub fn geometric_h(h_max: f64, h_min: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![h_max; count];
    }
    let q = (h_min / h_max).ln() / (count - 1) as f64;
    (0..count).map(|k| h_max * (q * k as f64).exp()).collect()
}
