//! Polynomial smoothstep transitions on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Smoothstep family `S` with `S(0) = 0`, `S(1) = 1`, flat ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothstep {
    /// `3t^2 - 2t^3`, C^1 at the knots.
    Cubic,
    /// `6t^5 - 15t^4 + 10t^3`, C^2 at the knots.
    Quintic,
    /// `35t^4 - 84t^5 + 70t^6 - 20t^7`, C^3 at the knots.
    Septic,
}

impl Smoothstep {
    pub fn name(self) -> &'static str {
        match self {
            Smoothstep::Cubic => "cubic",
            Smoothstep::Quintic => "quintic",
            Smoothstep::Septic => "septic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cubic" => Some(Smoothstep::Cubic),
            "quintic" => Some(Smoothstep::Quintic),
            "septic" => Some(Smoothstep::Septic),
            _ => None,
        }
    }

    /// Number of derivatives continuous across the knots.
    pub fn knot_continuity(self) -> usize {
        match self {
            Smoothstep::Cubic => 1,
            Smoothstep::Quintic => 2,
            Smoothstep::Septic => 3,
        }
    }

    /// `[S, S', S'', S''']` at `t`, clamped outside `[0, 1]`.
    pub fn eval<T: Real>(self, t: T) -> [T; 4] {
        let z = T::zero();
        if t <= z {
            return [z; 4];
        }
        if t >= T::one() {
            return [T::one(), z, z, z];
        }
        let c = |x: f64| T::lit(x);
        let t2 = t * t;
        let t3 = t2 * t;
        match self {
            Smoothstep::Cubic => [
                t2 * (c(3.0) - c(2.0) * t),
                c(6.0) * t * (T::one() - t),
                c(6.0) - c(12.0) * t,
                c(-12.0),
            ],
            Smoothstep::Quintic => {
                let u = T::one() - t;
                [
                    t3 * (t * (t * c(6.0) - c(15.0)) + c(10.0)),
                    c(30.0) * t2 * u * u,
                    c(60.0) * t * u * (T::one() - c(2.0) * t),
                    c(60.0) * (T::one() - c(6.0) * t + c(6.0) * t2),
                ]
            }
            Smoothstep::Septic => {
                let u = T::one() - t;
                let t4 = t2 * t2;
                [
                    t4 * (c(35.0) + t * (c(-84.0) + t * (c(70.0) - c(20.0) * t))),
                    c(140.0) * t3 * u * u * u,
                    c(420.0) * t2 * u * u * (T::one() - c(2.0) * t),
                    c(840.0) * t * u * (T::one() - c(5.0) * t + c(5.0) * t2),
                ]
            }
        }
    }

    /// `int_0^t S(u) du`, clamped below 0; linear continuation above 1.
    pub fn integral<T: Real>(self, t: T) -> T {
        let c = |x: f64| T::lit(x);
        if t <= T::zero() {
            return T::zero();
        }
        let (tt, extra) = if t > T::one() { (T::one(), t - T::one()) } else { (t, T::zero()) };
        let t2 = tt * tt;
        let t4 = t2 * t2;
        let base = match self {
            Smoothstep::Cubic => t2 * tt - t4 / c(2.0),
            Smoothstep::Quintic => t4 * (c(2.5) + tt * (c(-3.0) + tt)),
            Smoothstep::Septic => {
                t4 * tt * (c(7.0) + tt * (c(-14.0) + tt * (c(10.0) - c(2.5) * tt)))
            }
        };
        base + extra
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_integrals() {
        for s in [Smoothstep::Cubic, Smoothstep::Quintic, Smoothstep::Septic] {
            assert_eq!(s.eval(0.0f64)[0], 0.0);
            assert_eq!(s.eval(1.0f64)[0], 1.0);
            assert!((s.integral(1.0f64) - 0.5).abs() < 1e-15, "{s:?}");
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let d = 1e-5;
        for s in [Smoothstep::Cubic, Smoothstep::Quintic, Smoothstep::Septic] {
            for &t in &[0.13f64, 0.4, 0.77] {
                let e = s.eval(t);
                let p = s.eval(t + d);
                let m = s.eval(t - d);
                for k in 0..3 {
                    assert!(((p[k] - m[k]) / (2.0 * d) - e[k + 1]).abs() < 1e-7, "{s:?} {k}");
                }
                let q = (s.integral(t + d) - s.integral(t - d)) / (2.0 * d);
                assert!((q - e[0]).abs() < 1e-9);
            }
        }
    }
}
