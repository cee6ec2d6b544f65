//! Scalar abstraction shared by the generic core.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar the core is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count or index.
    #[inline]
    fn of_usize(k: usize) -> Self {
        Self::from_usize(k).expect("index representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cx<T> = Complex<T>;

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub fn cre<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Euclidean norm of a complex vector.
pub fn norm2<T: Real>(v: &[Cx<T>]) -> T {
    let scale = v.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = v
        .iter()
        .map(|z| {
            let a = z.re / scale;
            let b = z.im / scale;
            a * a + b * b
        })
        .sum();
    scale * s.sqrt()
}

/// Inner product `<a, b> = sum conj(a_i) b_i`.
pub fn dot<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Cx<T> {
    a.iter()
        .zip(b)
        .fold(Cx::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}
