use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::weight::{build_weight, m_weight, WeightFunction, WeightShape};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat};
use crate::model::MatrixPotential;
use crate::scalar::{cre, Real};
use crate::smooth::Smoothstep;

/// `V_phi(r) = V(r) - (phi'^2 - h phi'') I_N`.
pub fn effective_potential<T: Real>(v: &MatrixPotential<T>, w: &WeightFunction<T>, h: T, r: T) -> CMat<T> {
    let p = w.eval(r);
    v.at(r).shift_diag(cre(-(p[1] * p[1] - h * p[2])))
}

/// `(E - V_phi) + (m/m')(-V' + (2 phi' phi'' - h phi''') I_N)`.
///
/// `h = 0` gives the semiclassical limit matrix.
pub fn certificate_matrix<T: Real>(
    v: &MatrixPotential<T>,
    w: &WeightFunction<T>,
    h: T,
    energy: T,
    s: T,
    r: T,
) -> Result<CMat<T>> {
    let (m, mp) = m_weight(r, s)?;
    if !(h >= T::zero()) {
        return Err(Error::invalid("h must be nonnegative"));
    }
    let p = w.eval(r);
    let ratio = m / mp;
    let base = effective_potential(v, w, h, r).scale(cre(-T::one())).shift_diag(cre(energy));
    let drift = v
        .derivative_at(r)
        .scale(cre(-ratio))
        .shift_diag(cre(ratio * (T::lit(2.0) * p[1] * p[2] - h * p[3])));
    Ok(base.add(&drift))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CarlemanCertificate {
    pub margin: f64,
    pub pass: bool,
    pub energy: f64,
    pub s: f64,
    /// Tested semiclassical parameters; the trailing `0` is the limit matrix.
    pub h_set: Vec<f64>,
    pub radii: Vec<f64>,
    /// Smallest eigenvalue at each radius, minimized over `h_set`.
    pub min_eigenvalue: Vec<f64>,
    pub worst_r: f64,
    pub worst_h: f64,
}

/// Minimum over `r_grid x (h_set + {0})` of the smallest certificate eigenvalue.
pub fn carleman_certificate<T: Real>(
    v: &MatrixPotential<T>,
    w: &WeightFunction<T>,
    energy: T,
    s: T,
    h_set: &[T],
    r_grid: &[T],
) -> Result<CarlemanCertificate> {
    m_weight(T::zero(), s)?;
    if r_grid.is_empty() {
        return Err(Error::invalid("certificate needs radii"));
    }
    let mut hs: Vec<T> = h_set.to_vec();
    if !hs.contains(&T::zero()) {
        hs.push(T::zero());
    }
    let rows: Vec<Result<(T, T)>> = r_grid
        .par_iter()
        .map(|&r| {
            let mut best = (T::infinity(), T::zero());
            for &h in &hs {
                let c = hermitian_eigenvalues(&certificate_matrix(v, w, h, energy, s, r)?)[0];
                if c < best.0 {
                    best = (c, h);
                }
            }
            Ok(best)
        })
        .collect();
    let rows: Vec<(T, T)> = rows.into_iter().collect::<Result<_>>()?;
    let mut worst = 0usize;
    for (k, row) in rows.iter().enumerate() {
        if row.0 < rows[worst].0 {
            worst = k;
        }
    }
    let margin = rows[worst].0.as_f64();
    Ok(CarlemanCertificate {
        margin,
        pass: margin > 0.0,
        energy: energy.as_f64(),
        s: s.as_f64(),
        h_set: hs.iter().map(|h| h.as_f64()).collect(),
        radii: r_grid.iter().map(|r| r.as_f64()).collect(),
        min_eigenvalue: rows.iter().map(|x| x.0.as_f64()).collect(),
        worst_r: r_grid[worst].as_f64(),
        worst_h: rows[worst].1.as_f64(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    /// Total number of weights evaluated (the zero weight counts as one).
    pub candidates: usize,
    pub seed: u64,
    /// Largest outer radius tried.
    pub r_max: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { candidates: 200, seed: 17, r_max: 12.0 }
    }
}

#[derive(Clone, Debug)]
pub struct WeightSearch<T: Real> {
    pub weight: WeightFunction<T>,
    pub certificate: CarlemanCertificate,
    pub evaluated: usize,
}

/// Searches `(R, R0, a)` for the largest certificate margin: the zero weight
/// first, then seeded random draws, then a coordinate refinement.
pub fn optimize_weight<T: Real>(
    v: &MatrixPotential<T>,
    energy: T,
    s: T,
    h_set: &[T],
    r_grid: &[T],
    budget: &SearchBudget,
) -> Result<WeightSearch<T>> {
    if !(energy > v.v_inf_norm()) {
        return Err(Error::invalid(format!("energy must exceed ||V_inf|| = {}", v.v_inf_norm())));
    }
    if budget.candidates == 0 {
        return Err(Error::invalid("search budget must allow at least one candidate"));
    }
    let eval = |shape: WeightShape| -> Result<(WeightFunction<T>, CarlemanCertificate)> {
        let w = build_weight(shape, r_grid)?;
        let c = carleman_certificate(v, &w, energy, s, h_set, r_grid)?;
        Ok((w, c))
    };
    let zero = WeightShape { r_inner: 1.0, r_outer: 2.0, slope: 0.0, profile: Smoothstep::Quintic };
    let mut best = eval(zero)?;
    let mut used = 1usize;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let a_max = 2.0 * energy.as_f64().abs().sqrt().max(0.5);
    let random_share = (budget.candidates.saturating_sub(1) * 2) / 3;
    for _ in 0..random_share {
        let r_inner = rng.gen_range(0.2..(budget.r_max / 2.0).max(0.3));
        let r_outer = r_inner + rng.gen_range(0.5..(budget.r_max - r_inner).max(0.6));
        let slope = rng.gen_range(0.0..a_max);
        let cand = eval(WeightShape { r_inner, r_outer, slope, profile: Smoothstep::Quintic })?;
        used += 1;
        if cand.1.margin > best.1.margin {
            best = cand;
        }
    }
    let mut step = [1.0, 1.0, a_max / 4.0];
    while used < budget.candidates {
        let base = best.0.shape();
        let mut improved = false;
        for k in 0..6 {
            if used >= budget.candidates {
                break;
            }
            let mut p = [base.r_inner, base.r_outer - base.r_inner, base.slope];
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            p[k / 2] += sign * step[k / 2];
            if p[0] <= 0.05 || p[1] <= 0.1 || p[2] < 0.0 {
                continue;
            }
            let shape = WeightShape { r_inner: p[0], r_outer: p[0] + p[1], slope: p[2], profile: base.profile };
            let cand = eval(shape)?;
            used += 1;
            if cand.1.margin > best.1.margin {
                best = cand;
                improved = true;
            }
        }
        if !improved {
            step.iter_mut().for_each(|x| *x /= 2.0);
            if step[0] < 1e-3 {
                break;
            }
        }
    }
    if !best.1.pass {
        return Err(Error::NoFeasibleWeight { best_margin: best.1.margin, candidates: used });
    }
    log::info!(
        "weight search: {} selected after {used} candidates, margin {}",
        if best.0.is_zero() { "a=0".to_string() } else { format!("{:?}", best.0.shape()) },
        best.1.margin
    );
    Ok(WeightSearch { weight: best.0, certificate: best.1, evaluated: used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{uniform_radii, PotentialConfig};

    fn quintic(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
        }
    }

    #[test]
    fn zero_weight_free_is_energy() {
        let v = PotentialConfig::new("free").unwrap().build::<f64>().unwrap();
        let radii = uniform_radii(10.0, 101);
        let w = WeightFunction::zero(&radii);
        let c = carleman_certificate(&v, &w, 1.0, 1.0, &[0.1, 0.05], &radii).unwrap();
        assert_eq!(c.margin, 1.0);
        assert!(c.pass);
    }

    #[test]
    fn constant_potential_is_energy_minus_v() {
        let v = MatrixPotential::constant(2, vec![0.0, 0.3, 0.3, 1.0], 1.0).unwrap();
        let w = WeightFunction::zero(&[0.0]);
        for r in [0.0, 0.5, 7.0] {
            let k = certificate_matrix(&v, &w, 0.1, 3.0, 1.0, r).unwrap();
            let expect = v.v_inf().scale(cre(-1.0)).shift_diag(cre(3.0));
            assert_eq!(k, expect);
        }
    }

    #[test]
    fn effective_potential_in_linear_zone() {
        let v = MatrixPotential::constant(2, vec![0.0, 0.0, 0.0, 1.0], 1.0).unwrap();
        let shape = WeightShape { r_inner: 2.0, r_outer: 4.0, slope: 0.5, profile: Smoothstep::Quintic };
        let w = build_weight(shape, &[0.0]).unwrap();
        let e = effective_potential(&v, &w, 0.1, 1.0);
        assert_eq!(e, CMat::from_real(2, 2, &[-0.25, 0.0, 0.0, 0.75]));
    }

    /// Independent oracle: 6th-order central differences of `m (E - V_phi)`
    /// with `phi'` written out from the quintic.
    #[test]
    fn matches_differentiation_oracle() {
        let v = PotentialConfig::new("coupled_gaussian").unwrap().build::<f64>().unwrap();
        let (e, s, h) = (2.0, 1.0, 0.05);
        let shape = WeightShape { r_inner: 1.0, r_outer: 3.0, slope: 0.6, profile: Smoothstep::Quintic };
        let w = build_weight(shape, &[0.0]).unwrap();
        let dphi = |r: f64| 0.6 * (1.0 - quintic((r - 1.0) / 2.0));
        let d2phi = |r: f64| {
            let t = (r - 1.0) / 2.0;
            if t <= 0.0 || t >= 1.0 { 0.0 } else { -0.3 * 30.0 * t * t * (1.0 - t) * (1.0 - t) }
        };
        let field = |r: f64, i: usize, j: usize| {
            let m = 1.0 - 1.0 / (1.0 + r);
            let shift = dphi(r).powi(2) - h * d2phi(r);
            let vij = v.at(r)[(i, j)].re;
            let diag = if i == j { e + shift } else { 0.0 };
            m * (diag - vij)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let r: f64 = rng.gen_range(0.2..6.0);
            let k = certificate_matrix(&v, &w, h, e, s, r).unwrap();
            let mp = 1.0 / (1.0 + r).powi(2);
            let st = 0.01;
            for i in 0..2 {
                for j in 0..2 {
                    let f = |x: f64| field(x, i, j);
                    let der = (-f(r - 3.0 * st) + 9.0 * f(r - 2.0 * st) - 45.0 * f(r - st)
                        + 45.0 * f(r + st)
                        - 9.0 * f(r + 2.0 * st)
                        + f(r + 3.0 * st))
                        / (60.0 * st);
                    assert!((der / mp - k[(i, j)].re).abs() < 1e-8, "r={r} ({i},{j}) {} {}", der / mp, k[(i, j)].re);
                }
            }
        }
    }

    #[test]
    fn free_search_keeps_zero_weight() {
        let v = PotentialConfig::new("free").unwrap().build::<f64>().unwrap();
        let radii = uniform_radii(10.0, 101);
        let out = optimize_weight(&v, 1.0, 1.0, &[0.1], &radii, &SearchBudget { candidates: 30, ..Default::default() }).unwrap();
        assert!(out.weight.is_zero());
        assert_eq!(out.certificate.margin, 1.0);
    }

    #[test]
    fn energy_below_top_branch_fails() {
        let v = PotentialConfig::new("coupled_gaussian").unwrap().build::<f64>().unwrap();
        let radii = uniform_radii(10.0, 201);
        let w = WeightFunction::zero(&radii);
        let c = carleman_certificate(&v, &w, 0.5, 1.0, &[0.1], &radii).unwrap();
        assert!(!c.pass);
        // Brute force over the same samples locates the violation.
        let worst = radii
            .iter()
            .map(|&r| hermitian_eigenvalues(&certificate_matrix(&v, &w, 0.1, 0.5, 1.0, r).unwrap())[0])
            .fold(f64::INFINITY, f64::min);
        assert_eq!(worst, c.margin);
    }

    #[test]
    fn tiny_budget_reports_infeasible() {
        let v = PotentialConfig::new("volcano").unwrap().build::<f64>().unwrap();
        let radii = uniform_radii(10.0, 201);
        let r = optimize_weight(&v, 0.2, 1.0, &[0.1], &radii, &SearchBudget { candidates: 1, ..Default::default() });
        assert!(matches!(r, Err(Error::NoFeasibleWeight { candidates: 1, .. })));
    }
}
