use serde::Serialize;

use super::potential::MatrixPotential;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat};
use crate::scalar::{cre, Real};

/// Principal symbol `p(r, xi) = |xi|^2 I_N + V(r)`.
pub fn eval_symbol<T: Real>(v: &MatrixPotential<T>, r: T, xi: T) -> CMat<T> {
    v.at(r).shift_diag(cre(xi * xi))
}

/// Sorted eigenvalues `lambda_1(r) <= ... <= lambda_N(r)`; one array per branch.
pub fn lambda_fields<T: Real>(v: &MatrixPotential<T>, grid: &[T]) -> Vec<Vec<T>> {
    let n = v.channels();
    let mut out = vec![Vec::with_capacity(grid.len()); n];
    for &r in grid {
        for (j, l) in hermitian_eigenvalues(&v.at(r)).into_iter().enumerate() {
            out[j].push(l);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LongRangeReport {
    /// max ||V(r) - V_inf|| (1 + r)^rho0
    pub value_ratio: f64,
    pub value_worst_r: f64,
    /// max ||V'(r)|| (1 + r)^(rho0 + 1)
    pub derivative_ratio: f64,
    pub derivative_worst_r: f64,
    pub pass: bool,
}

/// Checks the decay bounds with unit constant on a grid.
pub fn check_long_range<T: Real>(v: &MatrixPotential<T>, grid: &[T]) -> LongRangeReport {
    let rho0 = v.rho0();
    let vinf = v.v_inf();
    let mut rep = LongRangeReport {
        value_ratio: 0.0,
        value_worst_r: 0.0,
        derivative_ratio: 0.0,
        derivative_worst_r: 0.0,
        pass: true,
    };
    for &r in grid {
        let w = T::one() + r;
        let a = (v.at(r).sub(&vinf).norm2() * w.powf(rho0)).as_f64();
        let b = (v.derivative_at(r).norm2() * w.powf(rho0 + T::one())).as_f64();
        if a > rep.value_ratio {
            rep.value_ratio = a;
            rep.value_worst_r = r.as_f64();
        }
        if b > rep.derivative_ratio {
            rep.derivative_ratio = b;
            rep.derivative_worst_r = r.as_f64();
        }
    }
    rep.pass = rep.value_ratio <= 1.0 && rep.derivative_ratio <= 1.0;
    rep
}

/// Which eigenvalue branches to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchPolicy {
    All,
    /// A single branch, 1-based.
    Only(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint<T: Real> {
    pub r: T,
    pub xi: T,
    /// Branch index, 1-based.
    pub j: usize,
    pub lambda: T,
}

/// Samples of `Sigma_E = {|xi|^2 + lambda_j(r) = E}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySurfaceSample<T: Real> {
    pub energy: T,
    pub points: Vec<SurfacePoint<T>>,
}

pub fn sample_energy_surface<T: Real>(
    v: &MatrixPotential<T>,
    energy: T,
    r_grid: &[T],
    policy: BranchPolicy,
) -> EnergySurfaceSample<T> {
    let mut points = Vec::new();
    for &r in r_grid {
        for (idx, lam) in hermitian_eigenvalues(&v.at(r)).into_iter().enumerate() {
            let j = idx + 1;
            if let BranchPolicy::Only(b) = policy {
                if b != j {
                    continue;
                }
            }
            if lam > energy {
                continue;
            }
            let xi = (energy - lam).sqrt();
            points.push(SurfacePoint { r, xi, j, lambda: lam });
            if xi > T::zero() {
                points.push(SurfacePoint { r, xi: -xi, j, lambda: lam });
            }
        }
    }
    EnergySurfaceSample { energy, points }
}

/// Positivity report for `{p, x xi} = 2|xi|^2 I_N - r V'(r)` on sampled surfaces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeCertificate {
    pub e_lo: f64,
    pub e_hi: f64,
    pub margin: f64,
    pub worst_r: f64,
    pub worst_xi: f64,
    pub worst_branch: usize,
    pub worst_energy: f64,
    pub pass: bool,
    pub samples: usize,
    pub energies: usize,
    pub radii: usize,
}

/// Escape-function certificate for `G = x xi` over an energy window.
///
/// On `Sigma_E` the bracket depends on `xi` only through `|xi|^2 = E - lambda_j(r)`,
/// which is used directly.
pub fn escape_certificate<T: Real>(
    v: &MatrixPotential<T>,
    e_window: (T, T),
    r_grid: &[T],
    energies: usize,
) -> Result<EscapeCertificate> {
    let (e_lo, e_hi) = e_window;
    if !(e_lo <= e_hi) || energies == 0 {
        return Err(Error::invalid("energy window must satisfy E- <= E+ with at least one energy"));
    }
    if e_lo <= v.v_inf_norm() {
        return Err(Error::invalid(format!(
            "energy window must lie above ||V_inf|| = {}",
            v.v_inf_norm()
        )));
    }
    let es: Vec<T> = if energies == 1 || e_lo == e_hi {
        vec![e_lo]
    } else {
        (0..energies)
            .map(|k| e_lo + (e_hi - e_lo) * T::of_usize(k) / T::of_usize(energies - 1))
            .collect()
    };
    let two = T::lit(2.0);
    let mut best: Option<(T, T, T, usize, T)> = None;
    let mut samples = 0usize;
    for &r in r_grid {
        let lams = hermitian_eigenvalues(&v.at(r));
        let drift = v.derivative_at(r).scale(cre(-r));
        for &e in &es {
            for (idx, &lam) in lams.iter().enumerate() {
                if lam > e {
                    continue;
                }
                let k2 = e - lam;
                let m = drift.shift_diag(cre(two * k2));
                let c = hermitian_eigenvalues(&m)[0];
                samples += if k2 > T::zero() { 2 } else { 1 };
                if best.is_none_or(|b| c < b.0) {
                    best = Some((c, r, k2.sqrt(), idx + 1, e));
                }
            }
        }
    }
    let (c, r, xi, j, e) = best.ok_or(Error::EmptySurface { e_lo: e_lo.as_f64(), e_hi: e_hi.as_f64() })?;
    Ok(EscapeCertificate {
        e_lo: e_lo.as_f64(),
        e_hi: e_hi.as_f64(),
        margin: c.as_f64(),
        worst_r: r.as_f64(),
        worst_xi: xi.as_f64(),
        worst_branch: j,
        worst_energy: e.as_f64(),
        pass: c > T::zero(),
        samples,
        energies: es.len(),
        radii: r_grid.len(),
    })
}

/// Uniform radii `[0, r_max]` with `count` points.
pub fn uniform_radii<T: Real>(r_max: T, count: usize) -> Vec<T> {
    if count < 2 {
        return vec![T::zero(); count];
    }
    (0..count).map(|k| r_max * T::of_usize(k) / T::of_usize(count - 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PotentialConfig;

    fn free() -> MatrixPotential<f64> {
        PotentialConfig::new("free").unwrap().build().unwrap()
    }

    #[test]
    fn free_symbol() {
        let m = eval_symbol(&free(), 3.0, 2.0);
        assert_eq!(m[(0, 0)].re, 4.0);
    }

    #[test]
    fn constant_symbol() {
        let v = MatrixPotential::constant(2, vec![0.0, 0.0, 0.0, 1.0], 1.0).unwrap();
        let m = eval_symbol(&v, 5.0, 1.0);
        assert_eq!(m, CMat::from_real(2, 2, &[1.0, 0.0, 0.0, 2.0]));
    }

    #[test]
    fn pauli_x_fields() {
        let v = MatrixPotential::constant(2, vec![0.0, 1.0, 1.0, 0.0], 1.0).unwrap();
        let f = lambda_fields(&v, &[0.0, 1.0, 7.0]);
        assert_eq!(f, vec![vec![-1.0; 3], vec![1.0; 3]]);
    }

    #[test]
    fn closed_channel_excluded() {
        let v = MatrixPotential::<f64>::constant(2, vec![0.0, 0.0, 0.0, 2.0], 1.0).unwrap();
        let s = sample_energy_surface(&v, 1.0, &[0.0, 1.0], BranchPolicy::All);
        assert!(s.points.iter().all(|p| p.j == 1 && p.xi.abs() == 1.0f64));
        assert_eq!(s.points.len(), 4);
    }

    #[test]
    fn turning_point_emits_zero_momentum() {
        let v = MatrixPotential::<f64>::constant(1, vec![1.0], 1.0).unwrap();
        let s = sample_energy_surface(&v, 1.0, &[2.0], BranchPolicy::All);
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].xi, 0.0);
    }

    #[test]
    fn free_escape_margin_is_two_e() {
        let radii = uniform_radii(10.0, 50);
        let c = escape_certificate(&free(), (1.0, 1.0), &radii, 1).unwrap();
        assert_eq!(c.margin, 2.0);
        assert!(c.pass);
    }

    #[test]
    fn empty_surface_is_an_error() {
        let v = MatrixPotential::constant(1, vec![-5.0], 1.0)
            .unwrap()
            .with_term(vec![20.0], crate::model::Profile::Exponential { rate: 1e-9 })
            .unwrap();
        let radii = uniform_radii(1.0, 5);
        let r = escape_certificate(&v, (6.0, 7.0), &radii, 4);
        assert!(matches!(r, Err(Error::EmptySurface { .. })));
    }

    #[test]
    fn long_range_examples() {
        let radii = uniform_radii(100.0, 2001);
        // Unit amplitude gives sup e^{-r}(1+r)^2 = 4/e > 1, so halve it.
        let fast = PotentialConfig::new("exponential").unwrap().set("amplitude", 0.5).unwrap();
        let fast = fast.build::<f64>().unwrap();
        assert!(check_long_range(&fast, &radii).pass);
        let slow = PotentialConfig::new("algebraic").unwrap().set("rho0", 2.0).unwrap();
        assert!(!check_long_range(&slow.build::<f64>().unwrap(), &radii).pass);
        let flat = MatrixPotential::constant(2, vec![0.0, 0.0, 0.0, 1.0], 3.0).unwrap();
        let rep = check_long_range(&flat, &radii);
        assert!(rep.pass && rep.value_ratio == 0.0 && rep.derivative_ratio == 0.0);
    }
}
