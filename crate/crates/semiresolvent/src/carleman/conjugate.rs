use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::model::MatrixPotential;
use crate::operators::{discretize_plain, DiscretizedOperator, OperatorKind, RadialGrid};
use crate::scalar::{cre, cx, Real};

/// Discretization of `e^{phi/h} (P - z) e^{-phi/h}`:
/// `(-h^2 d^2/dr^2 + 2 h phi' d/dr + Q) I_N + V_phi - (E + i eps) I_N`,
/// with centred differences for the first-order term.
#[allow(clippy::too_many_arguments)]
pub fn conjugated_operator<T: Real>(
    v: &MatrixPotential<T>,
    w: &WeightFunction<T>,
    energy: T,
    eps: T,
    h: T,
    grid: &RadialGrid<T>,
    d: usize,
    ell: usize,
) -> Result<DiscretizedOperator<T>> {
    if !(eps >= T::zero()) {
        return Err(Error::invalid("eps must be nonnegative"));
    }
    let mut op = discretize_plain(v, h, grid, d, ell)?;
    let nch = v.channels();
    let n = grid.n();
    let z = cx(energy, eps);
    for (k, &r) in grid.nodes().iter().enumerate() {
        let p = w.eval(r);
        let shift = cre(-(p[1] * p[1] - h * p[2])) - z;
        let drift = h * p[1] / grid.mesh();
        for a in 0..nch {
            let i = k * nch + a;
            op.matrix.add(i, i, shift);
            if k + 1 < n {
                op.matrix.add(i, i + nch, cre(drift));
            }
            if k > 0 {
                op.matrix.add(i, i - nch, cre(-drift));
            }
        }
    }
    op.meta.kind = OperatorKind::Conjugated;
    let s = w.shape();
    op.meta.weight = Some(format!("R={} R0={} a={} profile={}", s.r_inner, s.r_outer, s.slope, s.profile.name()));
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleman::{build_weight, WeightShape};
    use crate::model::PotentialConfig;
    use crate::smooth::Smoothstep;

    #[test]
    fn zero_weight_is_plain_minus_energy() {
        let v = PotentialConfig::new("coupled_gaussian").unwrap().build::<f64>().unwrap();
        let g = RadialGrid::new(10.0, 150).unwrap();
        let w = WeightFunction::zero(g.nodes());
        let c = conjugated_operator(&v, &w, 2.0, 0.0, 0.1, &g, 3, 2).unwrap();
        let p = discretize_plain(&v, 0.1, &g, 3, 2).unwrap();
        assert_eq!(c.matrix, p.matrix.shifted(cre(-2.0)));
    }

    #[test]
    fn s_wave_matches_half_line() {
        let v = PotentialConfig::new("gaussian").unwrap().build::<f64>().unwrap();
        let g = RadialGrid::new(10.0, 150).unwrap();
        let shape = WeightShape { r_inner: 1.0, r_outer: 3.0, slope: 0.4, profile: Smoothstep::Quintic };
        let w = build_weight(shape, g.nodes()).unwrap();
        let a = conjugated_operator(&v, &w, 1.0, 0.01, 0.1, &g, 3, 0).unwrap();
        let b = conjugated_operator(&v, &w, 1.0, 0.01, 0.1, &g, 1, 0).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    /// Applied to `p(r) e^{-(r-3)^2}` the interior error is second order.
    #[test]
    fn second_order_against_analytic_application() {
        let v = PotentialConfig::new("gaussian").unwrap().build::<f64>().unwrap();
        let shape = WeightShape { r_inner: 1.0, r_outer: 4.0, slope: 0.7, profile: Smoothstep::Quintic };
        let (h, e) = (0.3, 0.8);
        let f = |r: f64| {
            let x = r - 3.0;
            let g = (-x * x).exp();
            let p = 1.0 + 0.5 * r;
            let gp = -2.0 * x * g;
            let gpp = (4.0 * x * x - 2.0) * g;
            (p * g, 0.5 * g + p * gp, 2.0 * 0.5 * gp + p * gpp)
        };
        let mut errs = Vec::new();
        for n in [199usize, 399] {
            let g = RadialGrid::new(10.0, n).unwrap();
            let w = build_weight(shape, g.nodes()).unwrap();
            let op = conjugated_operator(&v, &w, e, 0.0, h, &g, 1, 0).unwrap();
            let u: Vec<_> = g.nodes().iter().map(|&r| cre(f(r).0)).collect();
            let au = op.matrix.matvec(&u);
            let mut worst: f64 = 0.0;
            for (k, &r) in g.nodes().iter().enumerate() {
                if !(1.0..=8.0).contains(&r) {
                    continue;
                }
                let (u0, u1, u2) = f(r);
                let p = w.eval(r);
                let vphi = v.at(r)[(0, 0)].re - (p[1] * p[1] - h * p[2]);
                let exact = -h * h * u2 + 2.0 * h * p[1] * u1 + (vphi - e) * u0;
                worst = worst.max((au[k].re - exact).abs());
            }
            errs.push(worst);
        }
        let ratio = errs[0] / errs[1];
        assert!(ratio > 3.5 && ratio < 4.5, "{errs:?}");
    }
}
