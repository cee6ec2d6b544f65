use rayon::prelude::*;
use serde::Serialize;

use super::config::{RegionLaw, SweepConfig};
use super::setup::{build_potential, plan_grid, rays_and_tube, scaled_operator, theta_cap};
use super::sweep::NamedFit;
use crate::error::{Error, Result};
use crate::model::{escape_certificate, uniform_radii, EscapeCertificate, MatrixPotential};
use crate::numerics::{
    eigs_in_window, resolvent_norm, EigsOptions, EigsResult, FitModel, FitReport, SingularOptions, Window,
};
use crate::operators::{DiscretizedOperator, EssentialRays, RayClass};
use crate::scalar::{cx, Cx};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResonanceRecord {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    pub artifact: bool,
}

impl ResonanceRecord {
    pub fn z(&self) -> Cx<f64> {
        cx(self.re, self.im)
    }
}

/// Eigenvalues in tubes, or outside the sector swept by the rotated
/// continua, are marked as artifacts.
fn records(res: &EigsResult<f64>, rays: &EssentialRays<f64>) -> Vec<ResonanceRecord> {
    res.resonances
        .iter()
        .map(|r| ResonanceRecord {
            re: r.z.re,
            im: r.z.im,
            residual: r.residual,
            artifact: r.class == RayClass::RayArtifact || !(r.z.im >= 0.0 || rays.sector_contains(r.z)),
        })
        .collect()
}

/// `h |ln h|`.
pub fn kappa(h: f64) -> f64 {
    h * h.ln().abs()
}

/// Depth of the tested region below the real axis.
pub fn region_depth(cfg: &SweepConfig, h: f64) -> f64 {
    match cfg.law {
        RegionLaw::Log => cfg.c * kappa(h),
        RegionLaw::Exp => cfg.exp_prefactor * (-cfg.exp_rate / h).exp(),
    }
}

/// `max(3 C h |ln h|, 0.1)` for the log law, the configured angle for the
/// exponential law; scaled by `theta_scale` and capped below the analyticity angle.
pub fn region_theta(cfg: &SweepConfig, v: &MatrixPotential<f64>, h: f64) -> f64 {
    let base = match cfg.law {
        RegionLaw::Log => (3.0 * cfg.c * kappa(h)).max(0.1),
        RegionLaw::Exp => cfg.theta,
    };
    (base * cfg.theta_scale).min(theta_cap(v))
}

/// Distance from the real segment `[lo, hi]` to the rays at angle `-2 theta`.
pub fn ray_clearance(v: &MatrixPotential<f64>, lo: f64, hi: f64, theta: f64) -> f64 {
    let s = (2.0 * theta).sin();
    v.thresholds()
        .iter()
        .map(|&t| if t <= lo { (lo - t) * s } else if t <= hi { 0.0 } else { t - hi })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionPoint {
    pub h: f64,
    pub theta: f64,
    pub depth: f64,
    /// Candidates with `Im z >= -depth`.
    pub candidates: Vec<ResonanceRecord>,
    /// Candidates found below the region, within the extended search depth.
    pub below: Vec<ResonanceRecord>,
    pub artifacts: usize,
    pub search_depth: f64,
    pub tube: f64,
    pub touches_rays: bool,
    pub coverage_complete: bool,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionReport {
    pub law: RegionLaw,
    pub c: f64,
    pub exp_rate: f64,
    pub exp_prefactor: f64,
    pub window: (f64, f64),
    pub points: Vec<RegionPoint>,
    /// No candidate in the region at any h.
    pub empty: bool,
    /// Smallest `-Im z - depth` over candidates found below the region.
    pub margin: Option<f64>,
    pub certificate: Option<EscapeCertificate>,
    pub diagnostic: bool,
}

impl RegionReport {
    pub fn empty_at(&self, h: f64) -> Option<bool> {
        self.points.iter().find(|p| p.h == h).map(|p| p.candidates.is_empty())
    }
}

/// Escape certificate over the configured energy window.
pub fn window_certificate(cfg: &SweepConfig, v: &MatrixPotential<f64>) -> Result<EscapeCertificate> {
    let r_max = (cfg.onset + 10.0).max(30.0);
    escape_certificate(v, cfg.e_window, &uniform_radii(r_max, 1201), 9)
}

/// Resonance-free region check `{Re z in window, -depth(h) <= Im z <= 0}`.
pub fn resonance_region_check(cfg: &SweepConfig) -> Result<RegionReport> {
    cfg.validate()?;
    let v = build_potential(cfg)?;
    if !v.is_analytic() {
        return Err(Error::invalid("region checks need an analytic potential"));
    }
    let certificate = match cfg.law {
        RegionLaw::Log => {
            let cert = window_certificate(cfg, &v);
            match cert {
                Ok(c) if c.pass => Some(c),
                Ok(c) if cfg.diagnostic => Some(c),
                Ok(c) => return Err(Error::CertificateMissing { margin: c.margin }),
                Err(e) if cfg.diagnostic => {
                    log::warn!("escape certificate unavailable: {e}");
                    None
                }
                Err(Error::EmptySurface { .. }) | Err(Error::InvalidInput(_)) => {
                    return Err(Error::CertificateMissing { margin: f64::NAN })
                }
                Err(e) => return Err(e),
            }
        }
        RegionLaw::Exp => None,
    };
    let points: Vec<RegionPoint> =
        cfg.h_list.par_iter().map(|&h| region_point(cfg, &v, h)).collect::<Result<_>>()?;
    let empty = points.iter().all(|p| p.candidates.is_empty());
    let margin = points
        .iter()
        .flat_map(|p| p.below.iter().map(move |r| -r.im - p.depth))
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))));
    Ok(RegionReport {
        law: cfg.law,
        c: cfg.c,
        exp_rate: cfg.exp_rate,
        exp_prefactor: cfg.exp_prefactor,
        window: cfg.e_window,
        points,
        empty,
        margin,
        certificate,
        diagnostic: cfg.diagnostic,
    })
}

fn region_point(cfg: &SweepConfig, v: &MatrixPotential<f64>, h: f64) -> Result<RegionPoint> {
    let theta = region_theta(cfg, v, h);
    let depth = region_depth(cfg, h);
    let (lo, hi) = cfg.e_window;
    let clearance = ray_clearance(v, lo, hi, theta);
    let search = match cfg.law {
        RegionLaw::Log => 2.0 * depth,
        RegionLaw::Exp => (2.0 * depth).max(0.25 * clearance),
    };
    let plan = plan_grid(cfg, v, h, theta, cfg.onset, cfg.e_window);
    let grid = plan.grid()?;
    let op = scaled_operator(cfg, v, h, &grid, theta, cfg.onset)?;
    let mut opts = EigsOptions { seed: cfg.seed, ..EigsOptions::default() };
    let (rays, tube) = rays_and_tube(cfg, v, h, &grid, theta, cfg.onset, (lo, hi), &opts)?;
    opts.tube_half_width = tube;
    let window = Window::new((lo, hi), (-search, 0.0))?;
    let res = eigs_in_window(&op, &window, &rays, &opts)?;
    let all = records(&res, &rays);
    let artifacts = all.iter().filter(|r| r.artifact).count();
    let (candidates, below): (Vec<_>, Vec<_>) =
        all.into_iter().filter(|r| !r.artifact).partition(|r| r.im >= -depth);
    Ok(RegionPoint {
        h,
        theta,
        depth,
        candidates,
        below,
        artifacts,
        search_depth: search,
        tube,
        touches_rays: res.touches_rays,
        coverage_complete: res.coverage_complete,
        size: op.size(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WidthPoint {
    pub h: f64,
    pub re: f64,
    pub im: f64,
    pub width: f64,
    /// `|z(theta) - z(theta_alt)|`.
    pub theta_deviation: f64,
    pub theta_relative: f64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WidthReport {
    pub points: Vec<WidthPoint>,
    pub fit: FitReport,
    /// Decay rate `S` of `-Im z ~ exp(-S / h)`.
    pub rate: f64,
    pub mesh_refinement: f64,
    pub depth: Vec<f64>,
}

/// Tracks the candidate nearest the real axis across the h list at two
/// angles on one grid; `mesh_refinement` divides the mesh.
pub fn resonance_width_sweep(cfg: &SweepConfig, mesh_refinement: f64) -> Result<WidthReport> {
    cfg.validate()?;
    let v = build_potential(cfg)?;
    if !(mesh_refinement >= 1.0) {
        return Err(Error::invalid("mesh refinement must be at least 1"));
    }
    let runs: Vec<(WidthPoint, f64)> = cfg
        .h_list
        .par_iter()
        .map(|&h| width_point(cfg, &v, h, mesh_refinement))
        .collect::<Result<_>>()?;
    let points: Vec<WidthPoint> = runs.iter().map(|r| r.0).collect();
    let series: Vec<(f64, f64)> = points.iter().map(|p| (p.h, p.width)).collect();
    let fit = crate::numerics::fit_scaling(&series, FitModel::ExpInv)?;
    Ok(WidthReport { rate: -fit.b, fit, points, mesh_refinement, depth: runs.iter().map(|r| r.1).collect() })
}

fn width_point(cfg: &SweepConfig, v: &MatrixPotential<f64>, h: f64, refine: f64) -> Result<(WidthPoint, f64)> {
    let (lo, hi) = cfg.e_window;
    let t_min = cfg.theta.min(cfg.theta_alt);
    let depth = cfg.depth.unwrap_or_else(|| kappa(h));
    let plan = plan_grid(cfg, v, h, t_min, cfg.onset, cfg.e_window).refined(refine);
    let grid = plan.grid()?;
    let window = Window::new((lo, hi), (-depth, 0.0))?;
    let mut tracked = Vec::new();
    let mut size = 0;
    for theta in [cfg.theta, cfg.theta_alt] {
        let op = scaled_operator(cfg, v, h, &grid, theta, cfg.onset)?;
        size = op.size();
        let mut opts = EigsOptions { seed: cfg.seed, ..EigsOptions::default() };
        let (rays, tube) = rays_and_tube(cfg, v, h, &grid, theta, cfg.onset, (lo, hi), &opts)?;
        opts.tube_half_width = tube;
        let res = eigs_in_window(&op, &window, &rays, &opts)?;
        tracked.push(records(&res, &rays).into_iter().filter(|r| !r.artifact).map(|r| r.z()).collect::<Vec<_>>());
    }
    let first = tracked[0]
        .iter()
        .copied()
        .max_by(|a, b| a.im.total_cmp(&b.im))
        .ok_or(Error::TrackingLost { h })?;
    let partner = tracked[1]
        .iter()
        .copied()
        .min_by(|a, b| (a - first).norm().total_cmp(&(b - first).norm()))
        .ok_or(Error::UnmatchedResonance { first: tracked[0].len(), second: 0 })?;
    let dev = (partner - first).norm();
    if !(first.im < 0.0) {
        return Err(Error::TrackingLost { h });
    }
    Ok((
        WidthPoint {
            h,
            re: first.re,
            im: first.im,
            width: -first.im,
            theta_deviation: dev,
            theta_relative: dev / first.norm(),
            size,
        },
        depth,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub re: f64,
    pub im: f64,
    /// `||(P_theta - z)^{-1}||`; infinite when the factorization broke down.
    pub norm: f64,
    pub singular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub h: f64,
    pub theta: f64,
    pub depth: f64,
    pub size: usize,
    pub max_norm: f64,
    pub argmax: (f64, f64),
    pub probes: Vec<Probe>,
    pub candidates: Vec<ResonanceRecord>,
    /// Every singular probe lies near a candidate.
    pub hits_matched: bool,
    /// `||R(z)|| >= 1 / |z - c|` at the probe above each candidate `c`.
    pub candidates_matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub points: Vec<ScanPoint>,
    pub fits: Vec<NamedFit>,
    pub consistent: bool,
}

impl ScanReport {
    pub fn fit(&self, name: &str) -> Option<&FitReport> {
        self.fits.iter().find(|f| f.name == name).and_then(|f| f.fit.as_ref())
    }
}

/// Distance within which a singular probe must meet a candidate.
pub const HIT_TOLERANCE: f64 = 1e-6;

/// Relative level `1 / (1e-10 ||P||)` above which a norm counts as singular.
pub const SINGULAR_LEVEL: f64 = 1e-10;

/// Norm of the scaled resolvent on an 8 x 5 lattice over
/// `Gamma = I_eps0 - i [0, eta h |ln h|]` with `theta = h |ln h|`, plus a probe
/// on the real axis above every candidate in `Gamma`.
pub fn distorted_resolvent_window_scan(cfg: &SweepConfig) -> Result<ScanReport> {
    cfg.validate()?;
    let v = build_potential(cfg)?;
    if !v.is_analytic() {
        return Err(Error::invalid("window scans need an analytic potential"));
    }
    let points: Vec<ScanPoint> =
        cfg.h_list.par_iter().map(|&h| scan_point(cfg, &v, h)).collect::<Result<_>>()?;
    let series: Vec<(f64, f64)> = points.iter().map(|p| (p.h, p.max_norm)).collect();
    let fits = vec![NamedFit::new("power", &series, FitModel::Power), NamedFit::new("exp_inv", &series, FitModel::ExpInv)];
    let consistent = points.iter().all(|p| p.hits_matched && p.candidates_matched);
    Ok(ScanReport { points, fits, consistent })
}

fn scan_point(cfg: &SweepConfig, v: &MatrixPotential<f64>, h: f64) -> Result<ScanPoint> {
    let theta = (kappa(h) * cfg.theta_scale).min(theta_cap(v));
    let depth = cfg.eta * kappa(h);
    let (lo, hi) = cfg.e_window;
    let plan = plan_grid(cfg, v, h, theta, cfg.onset, cfg.e_window);
    let grid = plan.grid()?;
    let op = scaled_operator(cfg, v, h, &grid, theta, cfg.onset)?;
    let mut opts = EigsOptions { seed: cfg.seed, ..EigsOptions::default() };
    let (rays, tube) = rays_and_tube(cfg, v, h, &grid, theta, cfg.onset, (lo, hi), &opts)?;
    opts.tube_half_width = tube;
    let window = Window::new((lo, hi), (-depth, 0.0))?;
    let res = eigs_in_window(&op, &window, &rays, &opts)?;
    let candidates: Vec<ResonanceRecord> = records(&res, &rays).into_iter().filter(|r| !r.artifact).collect();
    let mut zs = window.lattice(8, 5);
    zs.extend(candidates.iter().map(|c| cx(c.re, 0.0)));
    let solver = SingularOptions { seed: cfg.seed ^ 0x5ca9, ..SingularOptions::default() };
    let level = 1.0 / (SINGULAR_LEVEL * op.matrix.max_abs());
    let probes: Vec<Probe> = zs.iter().map(|&z| probe(&op, z, level, &solver)).collect::<Result<_>>()?;
    let (max_norm, argmax) = probes
        .iter()
        .fold((0.0f64, (lo, 0.0)), |m, p| if p.norm > m.0 { (p.norm, (p.re, p.im)) } else { m });
    let hits_matched = probes.iter().filter(|p| p.singular).all(|p| {
        candidates.iter().any(|c| (c.z() - cx(p.re, p.im)).norm() <= HIT_TOLERANCE * c.z().norm().max(1.0))
    });
    let candidates_matched = candidates.iter().all(|c| {
        probes.iter().any(|p| p.re == c.re && p.im == 0.0 && (p.singular || p.norm * c.im.abs() >= 1.0 - 1e-6))
    });
    Ok(ScanPoint {
        h,
        theta,
        depth,
        size: op.size(),
        max_norm: if max_norm.is_finite() { max_norm } else { level },
        argmax,
        probes,
        candidates,
        hits_matched,
        candidates_matched,
    })
}

fn probe(op: &DiscretizedOperator<f64>, z: Cx<f64>, level: f64, solver: &SingularOptions<f64>) -> Result<Probe> {
    match resolvent_norm(op, z, solver) {
        Ok(n) => Ok(Probe { re: z.re, im: z.im, norm: n.value, singular: n.value >= level }),
        Err(Error::Singular { .. }) => Ok(Probe { re: z.re, im: z.im, norm: f64::INFINITY, singular: true }),
        Err(Error::NoConvergence { estimate, .. }) if estimate >= level => {
            Ok(Probe { re: z.re, im: z.im, norm: estimate, singular: true })
        }
        Err(e) => Err(e),
    }
}
