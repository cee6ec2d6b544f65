use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{BandLu, BandMatrix};
use crate::model::MatrixPotential;
use crate::numerics::seeded_vector;
use crate::operators::{discretize_plain, RadialGrid};
use crate::scalar::{cre, norm2, Cx};
use crate::smooth::Smoothstep;

/// Cutoff `psi(x) = 1 - S5(x - 1)`: one on `[0, 1]`, zero beyond 2.
pub fn cutoff_psi(x: f64) -> f64 {
    1.0 - Smoothstep::Quintic.eval(x - 1.0)[0]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    /// Worst relative defect over the checks below.
    pub defect: f64,
    /// `R_P = R_A - R_A W R_P`.
    pub left: f64,
    /// `R_P = R_A - R_P W R_A`.
    pub right: f64,
    /// `R_P = R_A - R_A W R_A + R_A W chi R_P chi W R_A`.
    pub three_term: f64,
    /// Band solve against a dense solve, when the size allows one.
    pub dense: Option<f64>,
    pub size: usize,
    pub cutoff: f64,
}

/// Sizes up to this also get a dense reference solve.
pub const DENSE_REFERENCE_LIMIT: usize = 2000;

/// `P - z` counts as singular when a pivot falls below `PIVOT_LEVEL ||P||` or a
/// solve grows the seeded vector by more than `1 / (PIVOT_LEVEL ||P||)`.
pub const PIVOT_LEVEL: f64 = 1e-10;

fn factor(m: &BandMatrix<f64>, scale: f64) -> Result<BandLu<f64>> {
    let lu = m.factor()?;
    if lu.min_pivot() <= PIVOT_LEVEL * scale {
        return Err(Error::Singular { index: 0 });
    }
    Ok(lu)
}

/// Checks the resolvent identity relating `P = -h^2 Delta + V` and
/// `A = -h^2 Delta + (1 - psi(r / cutoff)) V` on a seeded vector.
#[allow(clippy::too_many_arguments)]
pub fn resolvent_identity_check(
    v: &MatrixPotential<f64>,
    h: f64,
    grid: &RadialGrid<f64>,
    d: usize,
    ell: usize,
    z: Cx<f64>,
    cutoff: f64,
    seed: u64,
) -> Result<IdentityReport> {
    if !(cutoff > 0.0) {
        return Err(Error::invalid("cutoff radius must be positive"));
    }
    let p = discretize_plain(v, h, grid, d, ell)?;
    let nch = v.channels();
    let n = p.size();
    // W = psi(r / cutoff) V(r) block by block; chi W = W since W vanishes past 2 cutoff.
    let mut w = BandMatrix::zeros(n, nch, nch);
    let mut chi = vec![0.0; n];
    for (k, &r) in grid.nodes().iter().enumerate() {
        let c = cutoff_psi(r / cutoff);
        let m = v.at(r);
        for a in 0..nch {
            chi[k * nch + a] = if r < 2.0 * cutoff { 1.0 } else { 0.0 };
            if c == 0.0 {
                continue;
            }
            for b in 0..nch {
                w.set(k * nch + a, k * nch + b, m[(a, b)] * c);
            }
        }
    }
    let mut a_mat = p.matrix.clone();
    for i in 0..n {
        for j in i.saturating_sub(nch)..(i + nch + 1).min(n) {
            if w.in_band(i, j) {
                a_mat.add(i, j, -w.get(i, j));
            }
        }
    }
    let scale = p.matrix.max_abs();
    let lp = factor(&p.matrix.shifted(-z), scale)?;
    let la = factor(&a_mat.shifted(-z), scale)?;
    let x = seeded_vector::<f64>(n, seed);
    let rp = |y: &[Cx<f64>]| lp.solve(y);
    let ra = |y: &[Cx<f64>]| la.solve(y);
    let mask = |y: &[Cx<f64>]| -> Vec<Cx<f64>> { y.iter().zip(&chi).map(|(a, c)| a * cre(*c)).collect() };
    let sub = |a: &[Cx<f64>], b: &[Cx<f64>]| -> Vec<Cx<f64>> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let add = |a: &[Cx<f64>], b: &[Cx<f64>]| -> Vec<Cx<f64>> { a.iter().zip(b).map(|(x, y)| x + y).collect() };

    let lhs = rp(&x);
    let ra_x = ra(&x);
    // ||x|| / ||b|| bounds the resolvent norm from below.
    let limit = 1.0 / (PIVOT_LEVEL * scale);
    for y in [&lhs, &ra_x] {
        if !(norm2(y) / norm2(&x) < limit) {
            return Err(Error::Singular { index: 0 });
        }
    }
    let scale_lhs = norm2(&lhs);
    let rel = |rhs: &[Cx<f64>]| norm2(&sub(&lhs, rhs)) / scale_lhs;
    let left = rel(&sub(&ra_x, &ra(&w.matvec(&lhs))));
    let right = rel(&sub(&ra_x, &rp(&w.matvec(&ra_x))));
    let w_ra_x = w.matvec(&ra_x);
    let second = ra(&w_ra_x);
    let inner = mask(&rp(&mask(&w_ra_x)));
    let third = ra(&w.matvec(&inner));
    let three_term = rel(&add(&sub(&ra_x, &second), &third));
    let dense = if n <= DENSE_REFERENCE_LIMIT {
        let reference = p.matrix.shifted(-z).to_dense().solve(&x)?;
        Some(rel(&reference))
    } else {
        None
    };
    let defect = [left, right, three_term, dense.unwrap_or(0.0)].into_iter().fold(0.0, f64::max);
    Ok(IdentityReport { defect, left, right, three_term, dense, size: n, cutoff })
}
