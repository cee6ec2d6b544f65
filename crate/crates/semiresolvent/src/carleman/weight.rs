use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::smooth::Smoothstep;

/// `m(r) = 1 - (1 + r)^{1 - 2s}` and `m'(r) = (2s - 1)(1 + r)^{-2s}`.
pub fn m_weight<T: Real>(r: T, s: T) -> Result<(T, T)> {
    if !(s > T::lit(0.5)) {
        return Err(Error::DegenerateWeight { s: s.as_f64() });
    }
    if !(r >= T::zero()) {
        return Err(Error::invalid("m_weight needs r >= 0"));
    }
    let one = T::one();
    let two_s = s + s;
    let m = one - (one + r).powf(one - two_s);
    let mp = (two_s - one) * (one + r).powf(-two_s);
    Ok((m, mp))
}

/// Shape parameters of the weight: slope `a` on `[0, R]`, smooth decay of
/// `phi'` to zero across `[R, R0]`, flat beyond.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightShape {
    pub r_inner: f64,
    pub r_outer: f64,
    pub slope: f64,
    pub profile: Smoothstep,
}

/// Weight `phi` with closed-form derivatives and samples on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction<T: Real> {
    shape: WeightShape,
    nodes: Vec<T>,
    /// `[phi, phi', phi'', phi''']` at each node.
    samples: Vec<[T; 4]>,
    plateau: T,
}

/// Flat record for serialization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightRecord {
    pub shape: WeightShape,
    pub plateau: f64,
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub d2phi: Vec<f64>,
    pub d3phi: Vec<f64>,
}

/// Builds `phi` and samples it at `nodes`.
pub fn build_weight<T: Real>(shape: WeightShape, nodes: &[T]) -> Result<WeightFunction<T>> {
    if shape.profile.knot_continuity() < 2 {
        return Err(Error::ProfileNotSmooth { profile: shape.profile.name().into() });
    }
    if !(shape.r_inner > 0.0) || !(shape.r_outer > shape.r_inner) || !shape.r_outer.is_finite() {
        return Err(Error::invalid("weight needs 0 < R < R0"));
    }
    if !(shape.slope >= 0.0) || !shape.slope.is_finite() {
        return Err(Error::invalid("weight slope must be finite and nonnegative"));
    }
    let mut w = WeightFunction { shape, nodes: nodes.to_vec(), samples: Vec::new(), plateau: T::zero() };
    w.plateau = w.eval(T::lit(shape.r_outer))[0];
    w.samples = nodes.iter().map(|&r| w.eval(r)).collect();
    Ok(w)
}

impl<T: Real> WeightFunction<T> {
    /// The zero weight (`a = 0`, `R = 1`, `R0 = 2`).
    pub fn zero(nodes: &[T]) -> Self {
        let shape = WeightShape { r_inner: 1.0, r_outer: 2.0, slope: 0.0, profile: Smoothstep::Quintic };
        build_weight(shape, nodes).expect("zero weight is valid")
    }

    pub fn shape(&self) -> WeightShape {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.shape.slope == 0.0
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn samples(&self) -> &[[T; 4]] {
        &self.samples
    }

    /// `phi(R0)`, the maximum of `phi`.
    pub fn plateau(&self) -> T {
        self.plateau
    }

    /// `[phi, phi', phi'', phi''']` at `r >= 0`.
    pub fn eval(&self, r: T) -> [T; 4] {
        let a = T::lit(self.shape.slope);
        let big_r = T::lit(self.shape.r_inner);
        let r0 = T::lit(self.shape.r_outer);
        let z = T::zero();
        if a == z {
            return [z; 4];
        }
        if r <= big_r {
            return [a * r, a, z, z];
        }
        let len = r0 - big_r;
        if r >= r0 {
            // Integral of the smoothstep over [0, 1] is 1/2.
            return [a * (big_r + r0) / T::lit(2.0), z, z, z];
        }
        let t = (r - big_r) / len;
        let s = self.shape.profile.eval(t);
        // Symmetry 1 - S(t) = S(1 - t) keeps each half free of cancellation.
        let half = T::lit(0.5);
        let phi = if t < half {
            a * big_r + a * len * (t - self.shape.profile.integral(t))
        } else {
            a * (big_r + r0) * half - a * len * self.shape.profile.integral(T::one() - t)
        };
        [
            phi,
            a * (T::one() - s[0]),
            -a * s[1] / len,
            -a * s[2] / (len * len),
        ]
    }

    pub fn to_record(&self) -> WeightRecord {
        let col = |k: usize| self.samples.iter().map(|s| s[k].as_f64()).collect();
        WeightRecord {
            shape: self.shape,
            plateau: self.plateau.as_f64(),
            r: self.nodes.iter().map(|r| r.as_f64()).collect(),
            phi: col(0),
            dphi: col(1),
            d2phi: col(2),
            d3phi: col(3),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_radii;
    use proptest::prelude::*;

    fn shape(r: f64, r0: f64, a: f64) -> WeightShape {
        WeightShape { r_inner: r, r_outer: r0, slope: a, profile: Smoothstep::Quintic }
    }

    #[test]
    fn m_weight_closed_forms() {
        assert_eq!(m_weight(0.0, 1.0).unwrap(), (0.0, 1.0));
        assert_eq!(m_weight(1.0, 1.0).unwrap(), (0.5, 0.25));
        assert!(matches!(m_weight(0.0, 0.5), Err(Error::DegenerateWeight { .. })));
    }

    #[test]
    fn zero_slope_is_zero_weight() {
        let nodes = uniform_radii(5.0, 51);
        let w = build_weight(shape(1.0, 2.0, 0.0), &nodes).unwrap();
        assert!(w.samples().iter().all(|s| s.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn plateau_matches_quadrature() {
        let nodes = uniform_radii(6.0, 6001);
        let w = build_weight(shape(1.0, 3.0, 0.5), &nodes).unwrap();
        // Trapezoid quadrature of phi' from the explicit quintic.
        let dphi = |r: f64| {
            if r <= 1.0 {
                0.5
            } else if r >= 3.0 {
                0.0
            } else {
                let t = (r - 1.0) / 2.0;
                0.5 * (1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t))
            }
        };
        let m = 30000;
        let dx = 3.0 / m as f64;
        let q: f64 = (0..=m)
            .map(|k| {
                let f = dphi(k as f64 * dx);
                if k == 0 || k == m { 0.5 * f } else { f }
            })
            .sum::<f64>()
            * dx;
        assert!((w.plateau() - q).abs() < 1e-8);
        assert!(w.plateau() > 0.5);
        assert_eq!(w.eval(4.0)[1], 0.0);
        for (r, s) in nodes.iter().zip(w.samples()) {
            if *r >= 3.0 {
                assert_eq!(s[0], w.plateau());
            }
        }
    }

    #[test]
    fn cubic_profile_rejected() {
        let mut s = shape(1.0, 2.0, 1.0);
        s.profile = Smoothstep::Cubic;
        assert!(matches!(build_weight::<f64>(s, &[0.0]), Err(Error::ProfileNotSmooth { .. })));
    }

    #[test]
    fn centered_differences_match_derivatives() {
        let nodes = uniform_radii::<f64>(8.0, 8001);
        let w = build_weight(shape(1.5, 4.0, 0.8), &nodes).unwrap();
        let mesh = nodes[1] - nodes[0];
        let s = w.samples();
        for k in 1..s.len() - 1 {
            // phi''' jumps at the knots, so stop at phi''.
            for j in 0..2 {
                let fd = (s[k + 1][j] - s[k - 1][j]) / (2.0 * mesh);
                assert!((fd - s[k][j + 1]).abs() < 1e-6, "k={k} j={j}");
            }
        }
    }

    proptest! {
        #[test]
        fn weight_support_and_monotonicity(r in 0.1f64..5.0, extra in 0.1f64..5.0, a in 0.0f64..3.0) {
            let nodes = uniform_radii(12.0, 601);
            let w = build_weight(shape(r, r + extra, a), &nodes).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for (x, s) in nodes.iter().zip(w.samples()) {
                prop_assert!(s[1] >= 0.0);
                prop_assert!(s[0] >= prev - 4.0 * f64::EPSILON * prev.abs());
                prev = s[0];
                if *x >= r + extra {
                    prop_assert_eq!(s[1], 0.0);
                    prop_assert_eq!(s[0], w.plateau());
                }
            }
        }

        #[test]
        fn m_weight_ranges(r in 0.0f64..1e3, s in 0.51f64..4.0) {
            let (m, mp) = m_weight(r, s).unwrap();
            prop_assert!((0.0..=1.0).contains(&m));
            prop_assert!(mp > 0.0);
        }
    }
}
