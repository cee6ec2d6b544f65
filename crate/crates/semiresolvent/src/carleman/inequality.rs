use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::weight::{m_weight, WeightFunction};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::model::MatrixPotential;
use crate::operators::{centrifugal_coefficient, simpson_weights};
use crate::scalar::{cre, cx, norm2, Cx, Real};

/// Packet `g(r) = exp(-(r - c)^2 / sigma^2) w` with a unit vector `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianPacket<T: Real> {
    pub center: T,
    pub sigma: T,
    pub direction: Vec<Cx<T>>,
}

impl<T: Real> GaussianPacket<T> {
    /// `(g, g', g'')` of the scalar profile.
    pub fn profile(&self, r: T) -> (T, T, T) {
        let x = r - self.center;
        let s2 = self.sigma * self.sigma;
        let g = (-(x * x) / s2).exp();
        let two = T::lit(2.0);
        (g, -two * x / s2 * g, (T::lit(4.0) * x * x / (s2 * s2) - two / s2) * g)
    }

    /// Interval `[c - 5 sigma, c + 5 sigma]` outside which the packet is below `e^{-25}`.
    pub fn support(&self) -> (T, T) {
        let w = T::lit(5.0) * self.sigma;
        (self.center - w, self.center + w)
    }
}

/// Seeded packets with `sigma` in `[0.2, 2]` and the support inside `[0, r_max]`.
pub fn gaussian_suite<T: Real>(count: usize, channels: usize, r_max: T, seed: u64) -> Vec<GaussianPacket<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_max = r_max.as_f64();
    let sigma_hi = 2.0f64.min(r_max / 10.5).max(0.2 + 1e-9);
    (0..count)
        .map(|_| {
            let sigma: f64 = rng.gen_range(0.2..sigma_hi);
            let center = rng.gen_range(5.0 * sigma..(r_max - 5.0 * sigma).max(5.0 * sigma + 1e-9));
            let mut dir: Vec<Cx<T>> = (0..channels)
                .map(|_| cx(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
                .collect();
            let n = norm2(&dir);
            dir.iter_mut().for_each(|z| *z /= n);
            GaussianPacket { center: T::lit(center), sigma: T::lit(sigma), direction: dir }
        })
        .collect()
}

/// Uniform quadrature nodes on `[0, r_max]` (ends included) with Simpson weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature<T: Real> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Quadrature<T> {
    pub fn uniform(r_max: T, intervals: usize) -> Result<Self> {
        if intervals < 2 || !(r_max > T::zero()) {
            return Err(Error::invalid("quadrature needs r_max > 0 and at least 2 intervals"));
        }
        let mesh = r_max / T::of_usize(intervals);
        Ok(Self {
            nodes: (0..=intervals).map(|k| mesh * T::of_usize(k)).collect(),
            weights: simpson_weights(intervals, mesh),
        })
    }

    pub fn r_max(&self) -> T {
        *self.nodes.last().unwrap_or(&T::zero())
    }

    pub fn mesh(&self) -> T {
        self.nodes[1] - self.nodes[0]
    }
}

fn escape_check<T: Real>(u: &GaussianPacket<T>, r_max: T) -> Result<()> {
    let (lo, hi) = u.support();
    if lo < T::zero() || hi > r_max {
        return Err(Error::TestFunctionEscapesGrid { lo: lo.as_f64(), hi: hi.as_f64(), r_max: r_max.as_f64() });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub h: f64,
    pub eps: f64,
    /// Max ratio over the suite.
    pub c_hat: f64,
    pub ratios: Vec<f64>,
}

/// Ratio `h^2 |e^{phi/h} v|^2_{-s} / (|e^{phi/h}(P - z) v|^2_{s} + eps h |e^{phi/h} v|^2)`
/// for one packet, with `P` applied analytically.
#[allow(clippy::too_many_arguments)]
pub fn carleman_ratio<T: Real>(
    v: &MatrixPotential<T>,
    w: &WeightFunction<T>,
    energy: T,
    eps: T,
    s: T,
    h: T,
    q: T,
    u: &GaussianPacket<T>,
    quad: &Quadrature<T>,
) -> Result<T> {
    escape_check(u, quad.r_max())?;
    let z = cx(energy, eps);
    let top = w.plateau();
    let (mut num, mut den, mut plain) = (T::zero(), T::zero(), T::zero());
    for (&r, &qw) in quad.nodes.iter().zip(&quad.weights) {
        let (g, _, g2) = u.profile(r);
        if g == T::zero() && g2 == T::zero() {
            continue;
        }
        // e^{(phi - max phi)/h}: the common factor cancels in the ratio.
        let e = ((w.eval(r)[0] - top) / h).exp();
        let bracket = (T::one() + r * r).powf(s);
        let vz = v.at(r).shift_diag(-z);
        let kin = if r > T::zero() { -h * h * g2 + h * h * q / (r * r) * g } else { -h * h * g2 };
        let mut pv = vz.matvec(&u.direction);
        for (p, d) in pv.iter_mut().zip(&u.direction) {
            *p = *p * g + *d * kin;
        }
        let pv2 = norm2(&pv).powi(2);
        let v2 = g * g; // |w| = 1
        num += qw * e * e * v2 / bracket;
        den += qw * e * e * pv2 * bracket;
        plain += qw * e * e * v2;
    }
    Ok(h * h * num / (den + eps * h * plain))
}

/// Empirical Carleman constant `C_hat` = max ratio over the suite.
#[allow(clippy::too_many_arguments)]
pub fn carleman_inequality_test<T: Real>(
    v: &MatrixPotential<T>,
    w: &WeightFunction<T>,
    energy: T,
    eps: T,
    s: T,
    h: T,
    d: usize,
    ell: usize,
    suite: &[GaussianPacket<T>],
    quad: &Quadrature<T>,
) -> Result<InequalityReport> {
    m_weight(T::zero(), s)?;
    let q = centrifugal_coefficient::<T>(d, ell)?;
    if suite.is_empty() {
        return Err(Error::invalid("empty test-function suite"));
    }
    if suite.iter().any(|u| u.direction.len() != v.channels()) {
        return Err(Error::invalid("packet direction does not match the channel count"));
    }
    let ratios: Vec<Result<T>> = suite
        .par_iter()
        .map(|u| carleman_ratio(v, w, energy, eps, s, h, q, u, quad))
        .collect();
    let ratios: Vec<f64> = ratios.into_iter().map(|r| r.map(|x| x.as_f64())).collect::<Result<_>>()?;
    let c_hat = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(InequalityReport { h: h.as_f64(), eps: eps.as_f64(), c_hat, ratios })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalReport {
    /// `|integral of (m L_h)'|`.
    pub defect: f64,
    /// `|m L_h|` at the outer end.
    pub boundary: f64,
    /// The packet reaches the grid ends, so the integral need not vanish.
    pub flagged: bool,
}

fn quad_form<T: Real>(a: &CMat<T>, x: &[Cx<T>], y: &[Cx<T>]) -> Cx<T> {
    let ay = a.matvec(y);
    x.iter().zip(&ay).fold(cre(T::zero()), |s, (p, q)| s + p.conj() * q)
}

/// Quadrature of `(m L_h)'` for the half-line functional
/// `L_h = |h u'|^2 - <(V_phi - E) u, u>`, with the derivative taken analytically.
#[allow(clippy::too_many_arguments)]
pub fn functional_l_check<T: Real>(
    u: &GaussianPacket<T>,
    v: &MatrixPotential<T>,
    w: &WeightFunction<T>,
    energy: T,
    s: T,
    h: T,
    quad: &Quadrature<T>,
) -> Result<FunctionalReport> {
    let r_max = quad.r_max();
    if !(u.center > T::zero() && u.center < r_max) {
        return Err(Error::TestFunctionEscapesGrid {
            lo: u.support().0.as_f64(),
            hi: u.support().1.as_f64(),
            r_max: r_max.as_f64(),
        });
    }
    let two = T::lit(2.0);
    let ml = |r: T| -> Result<(T, T)> {
        let (m, mp) = m_weight(r, s)?;
        let (g, g1, g2) = u.profile(r);
        let p = w.eval(r);
        let vphi = v.at(r).shift_diag(cre(-(p[1] * p[1] - h * p[2]) - energy));
        let dvphi = v.derivative_at(r).shift_diag(cre(-(two * p[1] * p[2] - h * p[3])));
        let dir = &u.direction;
        let form = quad_form(&vphi, dir, dir).re;
        let dform = quad_form(&dvphi, dir, dir).re;
        let l = h * h * g1 * g1 - form * g * g;
        let dl = two * h * h * g1 * g2 - dform * g * g - two * form * g * g1;
        Ok((m * l, mp * l + m * dl))
    };
    let mut integral = T::zero();
    for (&r, &qw) in quad.nodes.iter().zip(&quad.weights) {
        integral += qw * ml(r)?.1;
    }
    let boundary = ml(r_max)?.0.abs().as_f64();
    let (lo, hi) = u.support();
    Ok(FunctionalReport {
        defect: integral.abs().as_f64(),
        boundary,
        flagged: lo < T::zero() || hi > r_max || boundary > 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleman::{build_weight, WeightShape};
    use crate::model::PotentialConfig;
    use crate::smooth::Smoothstep;

    fn packet(c: f64, s: f64) -> GaussianPacket<f64> {
        GaussianPacket { center: c, sigma: s, direction: vec![cre(1.0)] }
    }

    fn weight(nodes: &[f64]) -> WeightFunction<f64> {
        let shape = WeightShape { r_inner: 1.0, r_outer: 3.0, slope: 0.5, profile: Smoothstep::Quintic };
        build_weight(shape, nodes).unwrap()
    }

    #[test]
    fn single_bump_ratio_is_finite() {
        let v = PotentialConfig::new("free").unwrap().build::<f64>().unwrap();
        let q = Quadrature::uniform(20.0, 4000).unwrap();
        let w = weight(&q.nodes);
        let rep = carleman_inequality_test(&v, &w, 1.0, 0.0, 1.0, 0.1, 1, 0, &[packet(6.0, 1.0)], &q).unwrap();
        assert!(rep.c_hat.is_finite() && rep.c_hat > 0.0);
    }

    #[test]
    fn ratio_decreases_with_absorption() {
        let v = PotentialConfig::new("gaussian").unwrap().build::<f64>().unwrap();
        let q = Quadrature::uniform(20.0, 4000).unwrap();
        let w = weight(&q.nodes);
        let u = packet(5.0, 0.8);
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.01, 0.1, 1.0, 10.0] {
            let r = carleman_ratio(&v, &w, 1.0, eps, 1.0, 0.1, 0.0, &u, &q).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn escaping_packet_rejected() {
        let v = PotentialConfig::new("free").unwrap().build::<f64>().unwrap();
        let q = Quadrature::uniform(10.0, 1000).unwrap();
        let w = weight(&q.nodes);
        let r = carleman_inequality_test(&v, &w, 1.0, 0.0, 1.0, 0.1, 1, 0, &[packet(9.0, 1.0)], &q);
        assert!(matches!(r, Err(Error::TestFunctionEscapesGrid { .. })));
    }

    #[test]
    fn suite_stays_inside() {
        let suite = gaussian_suite::<f64>(100, 2, 25.0, 4);
        assert_eq!(suite.len(), 100);
        for u in &suite {
            let (lo, hi) = u.support();
            assert!(lo >= 0.0 && hi <= 25.0 && u.sigma >= 0.2 && u.sigma <= 2.0);
            assert!((norm2(&u.direction) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn functional_integrates_to_zero() {
        let v = PotentialConfig::new("coupled_gaussian").unwrap().build::<f64>().unwrap();
        let q = Quadrature::uniform(12.0, 2400).unwrap();
        let w = weight(&q.nodes);
        let u = GaussianPacket { center: 4.0, sigma: 0.7, direction: vec![cx(0.6, 0.0), cx(0.0, 0.8)] };
        let rep = functional_l_check(&u, &v, &w, 2.0, 1.0, 0.1, &q).unwrap();
        assert!(rep.defect <= 1e-8 && !rep.flagged, "{rep:?}");
    }

    #[test]
    fn boundary_contact_is_flagged() {
        let v = PotentialConfig::new("gaussian").unwrap().build::<f64>().unwrap();
        let q = Quadrature::uniform(6.0, 1200).unwrap();
        let w = weight(&q.nodes);
        let rep = functional_l_check(&packet(5.5, 0.8), &v, &w, 1.0, 1.0, 0.1, &q).unwrap();
        assert!(rep.flagged && rep.defect > 1e-4);
    }

    #[test]
    fn defect_shrinks_under_refinement() {
        let v = PotentialConfig::new("gaussian").unwrap().build::<f64>().unwrap();
        let u = packet(4.0, 0.3);
        let mut prev = None;
        for intervals in [120usize, 240] {
            let q = Quadrature::uniform(10.0, intervals).unwrap();
            let w = weight(&q.nodes);
            let d = functional_l_check(&u, &v, &w, 1.0, 1.0, 0.1, &q).unwrap().defect;
            if let Some(p) = prev {
                assert!(p / d >= 3.0, "{p} {d}");
            }
            prev = Some(d);
        }
    }
}
