use serde::Serialize;

use super::singular::{extreme_singular, BandMap, SingularOptions, Which, WeightedInverse};
use crate::error::{Error, Result};
use crate::model::MatrixPotential;
use crate::operators::{discretize_plain, distorted_operator, DiscretizedOperator, DistortionProfile, RadialGrid};
use crate::scalar::{cx, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Plain operator at `E + i eps`.
    Absorption,
    /// Complex-scaled operator at `E + i eps` (normally `eps = 0`).
    Distortion,
}

#[derive(Clone, Copy, Debug)]
pub struct ResolventQuery<T: Real> {
    pub energy: T,
    pub eps: T,
    /// Weight exponent, `s > 1/2`.
    pub s: T,
    pub h: T,
    /// Cutoff radius; `None` keeps the weights global.
    pub truncation: Option<T>,
    pub method: Method,
    pub solver: SingularOptions<T>,
}

impl<T: Real> ResolventQuery<T> {
    pub fn new(energy: T, s: T, h: T) -> Self {
        Self {
            energy,
            eps: T::zero(),
            s,
            h,
            truncation: None,
            method: Method::Absorption,
            solver: SingularOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > T::lit(0.5)) {
            return Err(Error::invalid(format!("weighted norm requires s > 1/2 (got {})", self.s)));
        }
        if !(self.eps >= T::zero()) {
            return Err(Error::invalid("absorption eps must be nonnegative"));
        }
        if !(self.h > T::zero()) {
            return Err(Error::invalid("h must be positive"));
        }
        if !self.energy.is_finite() {
            return Err(Error::invalid("energy must be finite"));
        }
        if let Some(r0) = self.truncation {
            if !(r0 >= T::zero()) {
                return Err(Error::invalid("truncation radius must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn z(&self) -> Cx<T> {
        cx(self.energy, self.eps)
    }
}

/// Operator data shared by queries: potential, grid, dimension, angular
/// momentum and (for the distortion method) the scaling profile.
#[derive(Clone, Debug)]
pub struct OperatorContext<'a, T: Real> {
    pub potential: &'a MatrixPotential<T>,
    pub grid: &'a RadialGrid<T>,
    pub d: usize,
    pub ell: usize,
    pub distortion: Option<DistortionProfile<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResolventNorm {
    pub value: f64,
    pub iterations: usize,
    /// Worst relative residual over every band solve.
    pub max_solve_residual: f64,
    /// Set when some solve residual exceeded `1e-10`.
    pub flagged: bool,
    pub size: usize,
}

/// Residual level above which a norm computation is flagged.
pub const SOLVE_RESIDUAL_LIMIT: f64 = 1e-10;

/// `<r>^{-s}`, times the mask `r >= R0` when a cutoff is given.
pub fn weight_vector<T: Real>(op: &DiscretizedOperator<T>, s: T, truncation: Option<T>) -> Vec<T> {
    op.row_radii()
        .into_iter()
        .map(|r| {
            let w = (T::one() + r * r).sqrt().powf(-s);
            match truncation {
                Some(r0) if r < r0 => T::zero(),
                _ => w,
            }
        })
        .collect()
}

/// `|| L (A - z)^{-1} R ||` for real diagonal weights.
pub fn weighted_inverse_norm<T: Real>(
    op: &DiscretizedOperator<T>,
    z: Cx<T>,
    left: Vec<T>,
    right: Vec<T>,
    solver: &SingularOptions<T>,
) -> Result<ResolventNorm> {
    let size = op.size();
    if left.iter().all(|&w| w == T::zero()) || right.iter().all(|&w| w == T::zero()) {
        return Ok(ResolventNorm { value: 0.0, iterations: 0, max_solve_residual: 0.0, flagged: false, size });
    }
    let map = BandMap::new(op.matrix.shifted(-z))?;
    let b = WeightedInverse { inner: &map, left, right };
    let est = extreme_singular(&b, Which::Largest, solver)?;
    let res = map.max_residual();
    if !(res <= SOLVE_RESIDUAL_LIMIT) {
        log::warn!("band solve residual {res:e} exceeds {SOLVE_RESIDUAL_LIMIT:e} at z = {z}");
    }
    Ok(ResolventNorm {
        value: est.sigma.as_f64(),
        iterations: est.iterations,
        max_solve_residual: res,
        flagged: !(res <= SOLVE_RESIDUAL_LIMIT),
        size,
    })
}

/// Weighted resolvent norm `|| <r>^{-s} X (P - z)^{-1} X <r>^{-s} ||`.
pub fn weighted_resolvent_norm<T: Real>(
    ctx: &OperatorContext<'_, T>,
    q: &ResolventQuery<T>,
) -> Result<ResolventNorm> {
    q.validate()?;
    let op = match q.method {
        Method::Absorption => discretize_plain(ctx.potential, q.h, ctx.grid, ctx.d, ctx.ell)?,
        Method::Distortion => {
            let p = ctx
                .distortion
                .ok_or_else(|| Error::invalid("distortion method needs a scaling profile"))?;
            if !ctx.potential.is_analytic() {
                return Err(Error::invalid("distortion method needs an analytic potential"));
            }
            distorted_operator(ctx.potential, q.h, ctx.grid, &p, ctx.d, ctx.ell)?
        }
    };
    let w = weight_vector(&op, q.s, q.truncation);
    weighted_inverse_norm(&op, q.z(), w.clone(), w, &q.solver)
}

/// Unweighted `||(A - z)^{-1}||`.
pub fn resolvent_norm<T: Real>(
    op: &DiscretizedOperator<T>,
    z: Cx<T>,
    solver: &SingularOptions<T>,
) -> Result<ResolventNorm> {
    let ones = vec![T::one(); op.size()];
    weighted_inverse_norm(op, z, ones.clone(), ones, solver)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PotentialConfig;

    #[test]
    fn free_below_spectrum_is_bounded_by_distance() {
        let v = PotentialConfig::new("free").unwrap().build::<f64>().unwrap();
        let g = RadialGrid::new(20.0, 400).unwrap();
        let ctx = OperatorContext { potential: &v, grid: &g, d: 1, ell: 0, distortion: None };
        let q = ResolventQuery::new(-1.0, 1.0, 0.2);
        let n = weighted_resolvent_norm(&ctx, &q).unwrap();
        assert!(n.value <= 1.0 && n.value > 0.0);
        assert!(!n.flagged);
    }

    #[test]
    fn s_at_half_rejected() {
        let q = ResolventQuery::new(1.0f64, 0.5, 0.1);
        assert!(q.validate().is_err());
    }

    #[test]
    fn conjugate_energies_give_equal_norms() {
        let v = PotentialConfig::new("gaussian").unwrap().build::<f64>().unwrap();
        let g = RadialGrid::new(15.0, 300).unwrap();
        let ctx = OperatorContext { potential: &v, grid: &g, d: 3, ell: 1, distortion: None };
        let mut q = ResolventQuery::new(0.7, 1.0, 0.15);
        q.eps = 0.01;
        let a = weighted_resolvent_norm(&ctx, &q).unwrap().value;
        let b = {
            let op = discretize_plain(&v, 0.15, &g, 3, 1).unwrap();
            let w = weight_vector(&op, 1.0, None);
            weighted_inverse_norm(&op, cx(0.7, -0.01), w.clone(), w, &q.solver).unwrap().value
        };
        assert!((a - b).abs() <= 1e-9 * a, "{a} {b}");
    }
}
