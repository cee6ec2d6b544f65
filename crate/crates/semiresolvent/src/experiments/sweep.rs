use rayon::prelude::*;
use serde::Serialize;

use super::config::SweepConfig;
use super::setup::{build_potential, plan_grid, rays_and_tube, require_above_thresholds, scaled_operator, GridPlan};
use crate::error::{Error, Result};
use crate::model::{check_long_range, uniform_radii, LongRangeReport, MatrixPotential};
use crate::numerics::{
    eigs_in_window, fit_scaling, weight_vector, weighted_inverse_norm, EigsOptions, FitModel, FitReport, Method,
    SingularOptions, Window,
};
use crate::operators::{discretize_plain, DiscretizedOperator, RadialGrid};
use crate::scalar::cre;

/// Absorption-versus-distortion comparison at one `(h, E)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub energy: f64,
    pub distortion: f64,
    pub absorption: Option<f64>,
    pub absorption_half: Option<f64>,
    /// `2 N(eps/2) - N(eps)`.
    pub extrapolated: Option<f64>,
    pub relative_difference: Option<f64>,
    pub accepted: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub h: f64,
    pub global: Option<f64>,
    pub truncated: Option<f64>,
    pub energy_global: Option<f64>,
    pub energy_truncated: Option<f64>,
    pub energies: Vec<f64>,
    pub size: usize,
    pub grid: Option<GridPlan>,
    pub theta: f64,
    /// Some band-solve residual exceeded the limit.
    pub flagged: bool,
    /// `truncated <= global` holds.
    pub ordered: bool,
    pub cross_check: Option<CrossCheck>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedFit {
    pub name: String,
    pub fit: Option<FitReport>,
    pub error: Option<String>,
}

impl NamedFit {
    pub fn new(name: &str, data: &[(f64, f64)], model: FitModel) -> Self {
        match fit_scaling(data, model) {
            Ok(f) => Self { name: name.into(), fit: Some(f), error: None },
            Err(e) => Self { name: name.into(), fit: None, error: Some(e.to_string()) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// `global_exp_inv`, `global_power`, `truncated_power`.
    pub fits: Vec<NamedFit>,
    pub long_range: LongRangeReport,
}

impl SweepResult {
    pub fn fit(&self, name: &str) -> Option<&FitReport> {
        self.fits.iter().find(|f| f.name == name).and_then(|f| f.fit.as_ref())
    }
}

/// Global and `R0`-truncated weighted resolvent norms over the h list.
pub fn resolvent_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let v = build_potential(cfg)?;
    require_above_thresholds(&v, cfg.e_window.0.min(cfg.energy))?;
    let long_range = check_long_range(&v, &uniform_radii(50.0, 2001));
    // The decay hypotheses hold with some constant; only unbounded ratios are fatal.
    if !long_range.value_ratio.is_finite() || !long_range.derivative_ratio.is_finite() {
        return Err(Error::invalid(format!(
            "potential fails the decay bounds (value ratio {}, derivative ratio {})",
            long_range.value_ratio, long_range.derivative_ratio
        )));
    }
    let points: Vec<SweepPoint> = cfg.h_list.par_iter().map(|&h| sweep_point(cfg, &v, h)).collect();
    let series = |pick: fn(&SweepPoint) -> Option<f64>| -> Vec<(f64, f64)> {
        points.iter().filter_map(|p| pick(p).map(|y| (p.h, y))).collect()
    };
    let global = series(|p| p.global);
    let truncated = series(|p| p.truncated);
    let fits = vec![
        NamedFit::new("global_exp_inv", &global, FitModel::ExpInv),
        NamedFit::new("global_power", &global, FitModel::Power),
        NamedFit::new("truncated_power", &truncated, FitModel::Power),
    ];
    Ok(SweepResult { points, fits, long_range })
}

fn sweep_point(cfg: &SweepConfig, v: &MatrixPotential<f64>, h: f64) -> SweepPoint {
    let mut p = SweepPoint {
        h,
        global: None,
        truncated: None,
        energy_global: None,
        energy_truncated: None,
        energies: Vec::new(),
        size: 0,
        grid: None,
        theta: cfg.theta,
        flagged: false,
        ordered: true,
        cross_check: None,
        error: None,
    };
    if let Err(e) = fill_point(cfg, v, h, &mut p) {
        log::warn!("sweep point h = {h} failed: {e}");
        p.error = Some(e.to_string());
    }
    p
}

fn fill_point(cfg: &SweepConfig, v: &MatrixPotential<f64>, h: f64, p: &mut SweepPoint) -> Result<()> {
    let solver = SingularOptions { seed: cfg.seed ^ 0x5eed, ..SingularOptions::default() };
    let mut energies = cfg.energy_samples();
    let sup = |vals: &[(f64, f64)]| vals.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let (global, truncated) = match cfg.method {
        Method::Distortion => {
            let plan = plan_grid(cfg, v, h, cfg.theta, cfg.onset, cfg.e_window);
            let grid = plan.grid()?;
            let op = scaled_operator(cfg, v, h, &grid, cfg.theta, cfg.onset)?;
            p.grid = Some(plan);
            p.size = op.size();
            if cfg.energies > 1 {
                energies.extend(resonance_energies(cfg, v, h, &grid, &op)?);
            }
            energies.sort_by(f64::total_cmp);
            energies.dedup();
            let gw = weight_vector(&op, cfg.s, None);
            let tw = weight_vector(&op, cfg.s, Some(cfg.truncation));
            let mut g = Vec::new();
            let mut t = Vec::new();
            for &e in &energies {
                let a = weighted_inverse_norm(&op, cre(e), gw.clone(), gw.clone(), &solver)?;
                let b = weighted_inverse_norm(&op, cre(e), tw.clone(), tw.clone(), &solver)?;
                p.flagged |= a.flagged || b.flagged;
                g.push((e, a.value));
                t.push((e, b.value));
            }
            (sup(&g), sup(&t))
        }
        Method::Absorption => {
            let mut g = Vec::new();
            let mut t = Vec::new();
            for &e in &energies {
                let a = absorption_norms(cfg, v, h, e, None, &solver)?;
                let b = absorption_norms(cfg, v, h, e, Some(cfg.truncation), &solver)?;
                let (Some(a), Some(b)) = (a.2, b.2) else {
                    return Err(Error::invalid("absorption box exceeds the size guard"));
                };
                g.push((e, a));
                t.push((e, b));
            }
            (sup(&g), sup(&t))
        }
    };
    p.energies = energies;
    p.energy_global = Some(global.0);
    p.global = Some(global.1);
    p.energy_truncated = Some(truncated.0);
    p.truncated = Some(truncated.1);
    p.ordered = truncated.1 <= global.1 * (1.0 + 1e-8);
    if cfg.cross_check && cfg.method == Method::Distortion {
        p.cross_check = Some(cross_check(cfg, v, h, global.0, global.1, &solver)?);
    }
    Ok(())
}

/// Real parts of candidate resonances in `J - i[0, depth]`, added to the
/// energies of the supremum so that near-real poles are not stepped over.
fn resonance_energies(
    cfg: &SweepConfig,
    v: &MatrixPotential<f64>,
    h: f64,
    grid: &RadialGrid<f64>,
    op: &DiscretizedOperator<f64>,
) -> Result<Vec<f64>> {
    let (lo, hi) = cfg.e_window;
    if !(lo < hi) {
        return Ok(Vec::new());
    }
    let clearance = v
        .thresholds()
        .iter()
        .filter(|&&t| t <= lo)
        .map(|&t| (lo - t) * (2.0 * cfg.theta).sin())
        .fold(f64::INFINITY, f64::min);
    let depth = (h * h.ln().abs()).min(0.5 * clearance);
    let mut opts = EigsOptions { seed: cfg.seed, ..EigsOptions::default() };
    let (rays, tube) = rays_and_tube(cfg, v, h, grid, cfg.theta, cfg.onset, (lo, hi), &opts)?;
    opts.tube_half_width = tube;
    let window = Window::new((lo, hi), (-depth, 0.0))?;
    let res = eigs_in_window(op, &window, &rays, &opts)?;
    Ok(res.candidates().map(|r| r.z.re).filter(|&x| x >= lo && x <= hi).collect())
}

/// Rows above which the absorption box is not assembled.
pub const ABSORPTION_ROW_LIMIT: usize = 2_000_000;

/// Plain operator at `E + i eps` on a box long enough that outgoing waves
/// return damped by `exp(-6)`; returns `(N(eps), N(eps/2), 2 N(eps/2) - N(eps))`,
/// all `None` when the box exceeds [`ABSORPTION_ROW_LIMIT`].
pub fn absorption_norms(
    cfg: &SweepConfig,
    v: &MatrixPotential<f64>,
    h: f64,
    energy: f64,
    truncation: Option<f64>,
    solver: &SingularOptions<f64>,
) -> Result<(Option<f64>, Option<f64>, Option<f64>)> {
    let eps = 1e-3 * h;
    let k = v
        .thresholds()
        .iter()
        .filter(|&&t| t < energy)
        .map(|&t| (energy - t).sqrt())
        .fold(f64::INFINITY, f64::min);
    let k = if k.is_finite() { k } else { 1.0 };
    // Im k = eps / (2 h k) per unit length; a round trip at eps / 2 damps by exp(-6).
    let half_eps = eps / 2.0;
    let length = 12.0 * h * k / eps + cfg.onset + 1.0;
    let plan = plan_grid(cfg, v, h, 0.0, cfg.onset, (energy, energy));
    let rows = (length / plan.mesh).ceil() as usize * v.channels();
    if rows > ABSORPTION_ROW_LIMIT {
        return Ok((None, None, None));
    }
    let grid = RadialGrid::with_mesh(length, plan.mesh)?;
    let op = discretize_plain(v, h, &grid, cfg.d, cfg.ell)?;
    let w = weight_vector(&op, cfg.s, truncation);
    let a = weighted_inverse_norm(&op, crate::scalar::cx(energy, eps), w.clone(), w.clone(), solver)?.value;
    let b = weighted_inverse_norm(&op, crate::scalar::cx(energy, half_eps), w.clone(), w, solver)?.value;
    Ok((Some(a), Some(b), Some(2.0 * b - a)))
}

/// Relative agreement required between the two methods.
pub const CROSS_CHECK_TOLERANCE: f64 = 0.05;

fn cross_check(
    cfg: &SweepConfig,
    v: &MatrixPotential<f64>,
    h: f64,
    energy: f64,
    distortion: f64,
    solver: &SingularOptions<f64>,
) -> Result<CrossCheck> {
    let (a, b, x) = absorption_norms(cfg, v, h, energy, None, solver)?;
    let Some(xv) = x else {
        return Ok(CrossCheck {
            energy,
            distortion,
            absorption: None,
            absorption_half: None,
            extrapolated: None,
            relative_difference: None,
            accepted: true,
            note: format!("absorption box above {ABSORPTION_ROW_LIMIT} rows; not compared"),
        });
    };
    let rel = (xv - distortion).abs() / distortion.abs().max(f64::MIN_POSITIVE);
    Ok(CrossCheck {
        energy,
        distortion,
        absorption: a,
        absorption_half: b,
        extrapolated: x,
        relative_difference: Some(rel),
        accepted: rel <= CROSS_CHECK_TOLERANCE,
        note: String::new(),
    })
}
