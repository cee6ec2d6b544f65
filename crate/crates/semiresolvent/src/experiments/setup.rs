use serde::Serialize;

use super::config::SweepConfig;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::model::MatrixPotential;
use crate::numerics::{estimate_tube_half_width, EigsOptions};
use crate::operators::{
    distorted_operator, essential_rays, DiscretizedOperator, DistortionProfile, EssentialRays, RadialGrid,
};

/// Largest scaling angle used: 90% of the analyticity angle, below `pi/4`.
pub fn theta_cap(v: &MatrixPotential<f64>) -> f64 {
    let limit = if v.terms().is_empty() { std::f64::consts::FRAC_PI_2 } else { v.analyticity().angle() };
    (0.9 * limit).min(std::f64::consts::FRAC_PI_4 - 0.01)
}

/// `max(E+, sup lambda_N) - inf lambda_1` over `[0, r_ext]` and the thresholds.
pub fn kinetic_range(v: &MatrixPotential<f64>, e_hi: f64, r_ext: f64) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = e_hi;
    let count = 400;
    for k in 0..=count {
        let r = r_ext * k as f64 / count as f64;
        let lams = hermitian_eigenvalues(&v.at(r));
        lo = lo.min(lams[0]);
        hi = hi.max(*lams.last().unwrap_or(&lams[0]));
    }
    for t in v.thresholds() {
        lo = lo.min(t);
    }
    (hi - lo).max(1e-3)
}

/// Grid geometry chosen for one `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridPlan {
    pub mesh: f64,
    pub r_max: f64,
    /// Length of the scaled layer beyond the onset.
    pub layer: f64,
}

/// Mesh resolving the largest local wavenumber; a scaled layer long enough to
/// damp the slowest outgoing channel at `e_lo` by `exp(-attenuation)`.
pub fn plan_grid(cfg: &SweepConfig, v: &MatrixPotential<f64>, h: f64, theta: f64, onset: f64, e_window: (f64, f64)) -> GridPlan {
    let r_ext = onset + 1.0;
    let k2 = kinetic_range(v, e_window.1, r_ext.max(cfg.truncation + 1.0));
    let mesh = (cfg.mesh_factor * h / k2.sqrt()).min(cfg.mesh_max);
    let k_min = v
        .thresholds()
        .iter()
        .map(|&t| (e_window.0 - t).abs().sqrt())
        .fold(f64::INFINITY, f64::min)
        .max(1e-3);
    let layer = if theta > 0.0 { cfg.attenuation * h / (k_min * theta.sin()) } else { cfg.r_cap };
    let layer = layer.min(cfg.r_cap).max(1.0);
    GridPlan { mesh, r_max: r_ext + layer, layer }
}

impl GridPlan {
    pub fn grid(&self) -> Result<RadialGrid<f64>> {
        RadialGrid::with_mesh(self.r_max, self.mesh)
    }

    /// Same extent with the mesh divided by `factor`.
    pub fn refined(&self, factor: f64) -> Self {
        Self { mesh: self.mesh / factor, ..*self }
    }
}

pub fn build_potential(cfg: &SweepConfig) -> Result<MatrixPotential<f64>> {
    cfg.potential.build()
}

/// Scaled operator with exterior scaling from `onset`.
pub fn scaled_operator(
    cfg: &SweepConfig,
    v: &MatrixPotential<f64>,
    h: f64,
    grid: &RadialGrid<f64>,
    theta: f64,
    onset: f64,
) -> Result<DiscretizedOperator<f64>> {
    let cap = theta_cap(v);
    if theta > cap + 1e-12 {
        return Err(Error::AngleTooLarge { theta, limit: cap });
    }
    let profile = DistortionProfile::exterior(onset, theta)?;
    distorted_operator(v, h, grid, &profile, cfg.d, cfg.ell)
}

/// Rays of the scaled operator and the ray-tube half-width, estimated from
/// the free operator `V = V_inf` on the same grid.
pub fn rays_and_tube(
    cfg: &SweepConfig,
    v: &MatrixPotential<f64>,
    h: f64,
    grid: &RadialGrid<f64>,
    theta: f64,
    onset: f64,
    re_range: (f64, f64),
    opts: &EigsOptions<f64>,
) -> Result<(EssentialRays<f64>, f64)> {
    let thresholds = v.thresholds();
    let rays = essential_rays(&thresholds, theta);
    let free = free_of(v)?;
    let op = scaled_operator(cfg, &free, h, grid, theta, onset)?;
    let tube = estimate_tube_half_width(&op, &rays, re_range, opts)?;
    Ok((rays, tube))
}

/// Constant potential `V_inf` with the same channel count.
pub fn free_of(v: &MatrixPotential<f64>) -> Result<MatrixPotential<f64>> {
    let n = v.channels();
    let m = v.v_inf();
    let entries: Vec<f64> = (0..n * n).map(|k| m[(k / n, k % n)].re).collect();
    MatrixPotential::constant(n, entries, v.rho0())
}

/// Checks `E > ||V_inf||` for the whole window.
pub fn require_above_thresholds(v: &MatrixPotential<f64>, e_lo: f64) -> Result<()> {
    if e_lo <= v.v_inf_norm() {
        return Err(Error::invalid(format!(
            "energy {e_lo} must exceed ||V_inf|| = {}",
            v.v_inf_norm()
        )));
    }
    Ok(())
}
