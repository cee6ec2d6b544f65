use serde::Serialize;

use super::distortion::{DistortionProfile, ScalingKind};
use super::grid::RadialGrid;
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::model::MatrixPotential;
use crate::scalar::{cre, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Plain,
    Conjugated,
    Distorted,
}

/// Defining record of a discretized operator (the matrix itself is not persisted).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorMeta {
    pub kind: OperatorKind,
    pub h: f64,
    pub d: usize,
    pub ell: usize,
    pub channels: usize,
    pub grid: String,
    pub potential: String,
    pub theta: Option<f64>,
    pub onset: Option<f64>,
    pub weight: Option<String>,
}

/// Block-tridiagonal banded matrix; unknown `(k, i)` sits at row `k N + i`.
#[derive(Clone, Debug)]
pub struct DiscretizedOperator<T: Real> {
    pub matrix: BandMatrix<T>,
    pub grid: RadialGrid<T>,
    pub meta: OperatorMeta,
}

impl<T: Real> DiscretizedOperator<T> {
    pub fn channels(&self) -> usize {
        self.meta.channels
    }

    pub fn size(&self) -> usize {
        self.matrix.n()
    }

    /// Radius of every row (each node repeated `N` times).
    pub fn row_radii(&self) -> Vec<T> {
        let n = self.channels();
        self.grid.nodes().iter().flat_map(|&r| std::iter::repeat_n(r, n)).collect()
    }
}

/// Validates the spatial dimension and angular momentum; returns the
/// centrifugal coefficient `l(l + d - 2) + (d - 1)(d - 3)/4`.
pub fn centrifugal_coefficient<T: Real>(d: usize, ell: usize) -> Result<T> {
    match d {
        0 | 2 => Err(Error::UnsupportedDimension { d }),
        1 => {
            if ell != 0 {
                Err(Error::invalid("d = 1 has no angular momentum; use ell = 0"))
            } else {
                Ok(T::zero())
            }
        }
        _ => {
            let l = T::of_usize(ell);
            let dd = T::of_usize(d);
            Ok(l * (l + dd - T::lit(2.0)) + (dd - T::one()) * (dd - T::lit(3.0)) / T::lit(4.0))
        }
    }
}

fn potential_id<T: Real>(v: &MatrixPotential<T>) -> String {
    let mut s = v.label().to_string();
    for (k, x) in v.params() {
        s.push_str(&format!(" {k}={x}"));
    }
    s
}

/// Shared assembly of the plain (`distortion = None`) and scaled operators.
fn assemble<T: Real>(
    v: &MatrixPotential<T>,
    h: T,
    grid: &RadialGrid<T>,
    q: T,
    distortion: Option<&DistortionProfile<T>>,
) -> BandMatrix<T> {
    let nch = v.channels();
    let n = grid.n();
    let mesh = grid.mesh();
    let half = mesh / T::lit(2.0);
    let c = h * h / (mesh * mesh);
    let hq = h * h * q;
    let one = cre(T::one());
    let point = |r: T| -> (Cx<T>, Cx<T>) {
        match distortion {
            None => (cre(r), one),
            Some(p) => (p.contour(r), p.jacobian(r)),
        }
    };
    let nodes = grid.nodes();
    let mut isq = Vec::with_capacity(n);
    let mut zs = Vec::with_capacity(n);
    for &r in nodes {
        let (z, g) = point(r);
        zs.push(z);
        isq.push(one / g.sqrt());
    }
    // Inverse Jacobian at the midpoints r_k + mesh/2, k = 0..n (first one is r = mesh/2).
    let igm: Vec<Cx<T>> = (0..=n)
        .map(|k| {
            let r = half + mesh * T::of_usize(k);
            one / point(r).1
        })
        .collect();
    let mut m = BandMatrix::zeros(n * nch, nch, nch);
    for k in 0..n {
        let kin = (isq[k] * isq[k]) * (igm[k] + igm[k + 1]) * c;
        let cent = if q == T::zero() { cre(T::zero()) } else { cre(hq) / (zs[k] * zs[k]) };
        let vk = match distortion {
            None => v.at(nodes[k]),
            Some(_) => v.entries(zs[k]),
        };
        for a in 0..nch {
            for b in 0..nch {
                let mut e = vk[(a, b)];
                if a == b {
                    e = kin + cent + e;
                }
                m.set(k * nch + a, k * nch + b, e);
            }
        }
        if k + 1 < n {
            let off = -(isq[k] * igm[k + 1] * isq[k + 1]) * c;
            for a in 0..nch {
                m.set(k * nch + a, (k + 1) * nch + a, off);
                m.set((k + 1) * nch + a, k * nch + a, off);
            }
        }
    }
    m
}

/// Plain operator `-h^2 d^2/dr^2 + h^2 q / r^2 + V(r)` with Dirichlet ends.
pub fn discretize_plain<T: Real>(
    v: &MatrixPotential<T>,
    h: T,
    grid: &RadialGrid<T>,
    d: usize,
    ell: usize,
) -> Result<DiscretizedOperator<T>> {
    let q = centrifugal_coefficient::<T>(d, ell)?;
    if !(h > T::zero()) {
        return Err(Error::invalid("h must be positive"));
    }
    let matrix = assemble(v, h, grid, q, None);
    Ok(DiscretizedOperator {
        matrix,
        grid: grid.clone(),
        meta: OperatorMeta {
            kind: OperatorKind::Plain,
            h: h.as_f64(),
            d,
            ell,
            channels: v.channels(),
            grid: grid.id(),
            potential: potential_id(v),
            theta: None,
            onset: None,
            weight: None,
        },
    })
}

/// Checks that the scaled contour stays inside the analyticity region of `v`.
pub fn check_contour<T: Real>(
    v: &MatrixPotential<T>,
    grid: &RadialGrid<T>,
    profile: &DistortionProfile<T>,
) -> Result<()> {
    let theta = profile.theta();
    if theta == T::zero() {
        return Ok(());
    }
    let an = v.analyticity();
    if theta >= an.angle() {
        return Err(Error::AngleTooLarge { theta: theta.as_f64(), limit: an.angle().as_f64() });
    }
    let start = match profile.kind() {
        ScalingKind::Global => T::zero(),
        ScalingKind::Exterior { onset, .. } => T::lit(onset),
    };
    if !v.terms().is_empty() && an.kappa > T::zero() && start < an.kappa {
        return Err(Error::ContourSingularity {
            r: start.as_f64(),
            detail: format!(
                "scaling starts before the analyticity radius {}",
                an.kappa.as_f64()
            ),
        });
    }
    let pts: Vec<Cx<T>> = grid.nodes().iter().map(|&r| profile.contour(r)).collect();
    if let Some((r, msg)) = v.contour_singularity(&pts) {
        return Err(Error::ContourSingularity { r: r.as_f64(), detail: msg });
    }
    Ok(())
}

/// Complex-scaled operator in the symmetrized form
/// `-h^2 g^{-1/2} D (g^{-1} D (g^{-1/2} .)) + h^2 q / z^2 + V(z)`.
pub fn distorted_operator<T: Real>(
    v: &MatrixPotential<T>,
    h: T,
    grid: &RadialGrid<T>,
    profile: &DistortionProfile<T>,
    d: usize,
    ell: usize,
) -> Result<DiscretizedOperator<T>> {
    let q = centrifugal_coefficient::<T>(d, ell)?;
    if !(h > T::zero()) {
        return Err(Error::invalid("h must be positive"));
    }
    check_contour(v, grid, profile)?;
    let matrix = assemble(v, h, grid, q, Some(profile));
    Ok(DiscretizedOperator {
        matrix,
        grid: grid.clone(),
        meta: OperatorMeta {
            kind: OperatorKind::Distorted,
            h: h.as_f64(),
            d,
            ell,
            channels: v.channels(),
            grid: grid.id(),
            potential: potential_id(v),
            theta: Some(profile.theta().as_f64()),
            onset: Some(profile.onset().as_f64()),
            weight: None,
        },
    })
}

/// Closed-form Dirichlet spectrum of `-h^2 d^2/dr^2` on `n` interior nodes.
pub fn fd_laplacian_spectrum<T: Real>(h: T, grid: &RadialGrid<T>) -> Vec<T> {
    let n = grid.n();
    let c = T::lit(2.0) * h * h / (grid.mesh() * grid.mesh());
    (1..=n)
        .map(|k| c * (T::one() - (T::PI() * T::of_usize(k) / T::of_usize(n + 1)).cos()))
        .collect()
}
